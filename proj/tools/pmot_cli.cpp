#include <cstdio>
int main() { std::puts("pmot placeholder"); return 0; }
