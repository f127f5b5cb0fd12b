#include "cubecvx/suite.hpp"
#include <cstdio>
int main(){ return 0; }
