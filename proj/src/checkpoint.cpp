#include "halc/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "halc/common.hpp"

namespace halc {

namespace {

constexpr char kMagic[8] = {'H', 'A', 'L', 'C', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T x{};
    is.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!is) throw IoError("checkpoint: truncated file");
    return x;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ConstParamView& params) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("checkpoint: cannot open for writing: " + path.string());
    os.write(kMagic, sizeof(kMagic));
    write_pod(os, kVersion);
    write_pod(os, static_cast<uint32_t>(params.size()));
    for (const auto& [name, t] : params) {
        write_pod(os, static_cast<uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod(os, static_cast<uint32_t>(t->shape.size()));
        for (int64_t d : t->shape) write_pod(os, d);
        os.write(reinterpret_cast<const char*>(t->v.data()),
                 static_cast<std::streamsize>(t->v.size() * sizeof(double)));
    }
    if (!os) throw IoError("checkpoint: write failed: " + path.string());
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("checkpoint: bad magic: " + path.string());
    uint32_t version = read_pod<uint32_t>(is);
    if (version != kVersion)
        throw IoError("checkpoint: unsupported format version " + std::to_string(version));
    uint32_t count = read_pod<uint32_t>(is);
    std::vector<NamedTensor> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t name_len = read_pod<uint32_t>(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        uint32_t ndim = read_pod<uint32_t>(is);
        std::vector<int64_t> shape(ndim);
        int64_t numel = 1;
        for (uint32_t d = 0; d < ndim; ++d) {
            shape[d] = read_pod<int64_t>(is);
            numel *= shape[d];
        }
        Tensor t;
        t.shape = std::move(shape);
        t.v.resize(static_cast<size_t>(numel));
        is.read(reinterpret_cast<char*>(t.v.data()), static_cast<std::streamsize>(t.v.size() * sizeof(double)));
        if (!is) throw IoError("checkpoint: truncated tensor data");
        out.push_back({std::move(name), std::move(t)});
    }
    return out;
}

void load_checkpoint_into(const std::filesystem::path& path, const ParamView& params) {
    auto records = load_checkpoint(path);
    std::map<std::string, Tensor*> by_name;
    for (auto& [name, rec] : records) by_name[name] = &rec;
    for (const auto& [name, dst] : params) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw IoError("checkpoint: missing parameter '" + name + "'");
        if (it->second->shape != dst->shape) throw IoError("checkpoint: shape mismatch for '" + name + "'");
        *dst = std::move(*it->second);
    }
}

}  // namespace halc
