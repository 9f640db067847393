#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "halc/tensor.hpp"

namespace halc {

using ParamView = std::vector<std::pair<std::string, Tensor*>>;
using ConstParamView = std::vector<std::pair<std::string, const Tensor*>>;

// Binary {name, shape, values} records behind a magic + format-version
// header. Doubles are written as raw little-endian bytes, so a load/save
// round trip is bit-exact.
void save_checkpoint(const std::filesystem::path& path, const ConstParamView& params);

struct NamedTensor {
    std::string name;
    Tensor t;
};

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

// Loads into an existing parameter view, matching records by name and
// validating shapes. Throws IoError on missing or mismatched entries.
void load_checkpoint_into(const std::filesystem::path& path, const ParamView& params);

}  // namespace halc
