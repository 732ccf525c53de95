#include "dhr/dhr.hpp"
#include "dhr/io.hpp"

int main() { return 0; }
