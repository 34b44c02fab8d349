#include <cstdio>

#include "unclesim/unclesim.h"

int main() {
    std::printf("unclesim %s\n", usim_version());
    return 0;
}
