#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hgl/hypergraph.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(HGL_DATA_DIR) + "/" + name; }

inline std::string read_data(const std::string& name) {
    std::ifstream in(data_path(name));
    if (!in) throw hgl::Error("missing test data " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline hgl::Hypergraph load_hgr(const std::string& name) { return hgl::parse_hgr(read_data(name)); }

inline hgl::Hypergraph sg(const std::string& w) {
    std::vector<hgl::Symbol> word;
    for (char c : w) word.emplace_back(std::string(1, c));
    return hgl::string_graph(word);
}

}  // namespace testutil
