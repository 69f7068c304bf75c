// Regenerates the golden fixture corpus: make_golden_fixture <output-dir>

#include <exception>
#include <iostream>

#include "golden_fixture.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_golden_fixture <output-dir>\n";
    return 1;
  }
  try {
    rpys::fixture::write_golden_fixture(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "make_golden_fixture: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
