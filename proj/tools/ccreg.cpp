#include <cstdio>
int main(){ puts("ccreg: pending"); return 0; }
