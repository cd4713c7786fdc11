#ifndef EPIMIT_SYSTEM_IO_HPP
#define EPIMIT_SYSTEM_IO_HPP

#include <string>

#include "epimit/dsir.hpp"

namespace epimit {

// JSON system file shared by the D-SIR and G-SIR pipelines:
//   {
//     "schema_version": 1,
//     "n": 3,
//     "edges": [[from, to, rate], ...],
//     "healing": [...],
//     "x0": [...],
//     "r0": [...],
//     "candidates": [edge ids]        // optional
//   }
struct SystemFile {
    DsirSystem system;
    EdgeSet candidates;
};

SystemFile load_dsir_system(const std::string& path);
void save_dsir_system(const std::string& path, const DsirSystem& sys, const EdgeSet& candidates);

} // namespace epimit

#endif
