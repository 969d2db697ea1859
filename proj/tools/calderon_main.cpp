#include <cstdio>

int main() {
  std::puts("calderon: subcommands pending");
  return 2;
}
