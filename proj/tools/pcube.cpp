#include <cstdio>

int main() {
    std::puts("pcube cli placeholder");
    return 0;
}
