#include <cstdio>
int main() { std::puts("ospq placeholder"); return 0; }
