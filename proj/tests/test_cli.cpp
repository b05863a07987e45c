#include <cstdio>
int main(int, char**){ printf("placeholder\n"); return 0; }
