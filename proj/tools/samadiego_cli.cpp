#include <cstdio>

int main() {
  std::puts("samadiego CLI placeholder");
  return 0;
}
