#pragma once

#include <string>

#include "qcarpet/carpet.hpp"
#include "qcarpet/extension.hpp"
#include "qcarpet/modulus.hpp"

namespace qcarpet {

struct SvgOptions {
    int width = 640;
    bool timestamp = true;
};

std::string carpet_to_svg(const Carpet& S, const SvgOptions& opts = {});
std::string density_to_svg(const Density& d, const SvgOptions& opts = {});
std::string manifest_to_svg(const TowerManifest& m, const SvgOptions& opts = {});

} // namespace qcarpet
