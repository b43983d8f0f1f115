#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fixtures {

inline std::string dir() { return CWLAB_FIXTURE_DIR; }

inline std::string read(const std::string& name) {
    std::ifstream in(dir() + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Entry {
    const char* file;
    int n_coins;
    int weighings;
    bool pseudo;  // verifies under pseudo mode only
};

inline constexpr Entry kAll[] = {
    {"inline_2_3.txt", 3, 2, false},
    {"inline_2_4.txt", 4, 2, false},
    {"inline_3_4_balanced.txt", 4, 3, false},
    {"inline_3_6.txt", 6, 3, false},
    {"inline_3_6_scalable.txt", 6, 3, false},
    {"a_4_10.txt", 10, 4, false},
    {"b_4_11.txt", 11, 4, false},
    {"c_5_20.txt", 20, 5, false},
    {"d_6_36.txt", 36, 6, false},
    {"pseudo_4_11.txt", 11, 4, true},
};

}  // namespace fixtures
