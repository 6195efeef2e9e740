#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "fide/scalar.hpp"

int main(int argc, char** argv) {
  fide::set_precision(50);
  doctest::Context context(argc, argv);
  return context.run();
}
