#include <cstdio>

int main() {
    std::puts("bundleflow: placeholder");
    return 0;
}
