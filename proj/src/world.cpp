#include "halc/world.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace halc {

void WorldConfig::validate() const {
    if (categories.size() < 12) throw ConfigError("world: need at least 12 categories");
    if (colors.size() < 6) throw ConfigError("world: need at least 6 colors");
    if (grid_side < 1) throw ConfigError("world: grid_side must be positive");
    if (min_objects < 1 || min_objects > max_objects || max_objects > grid_cells())
        throw ConfigError("world: need 1 <= min_objects <= max_objects <= grid capacity");
    if (d_img < 8) throw ConfigError("world: d_img too small");
    std::set<std::string> seen(categories.begin(), categories.end());
    for (const auto& c : colors) seen.insert(c);
    if (seen.size() != categories.size() + colors.size())
        throw ConfigError("world: category/color words must be distinct");
}

Vocab::Vocab(const WorldConfig& cfg) {
    words_ = {"<bos>", "<eos>", "a", "and", ".", "describe", "image", "in", "detail"};
    period_ = 4;
    color0_ = static_cast<int>(words_.size());
    n_colors_ = static_cast<int>(cfg.colors.size());
    for (const auto& w : cfg.colors) words_.push_back(w);
    cat0_ = static_cast<int>(words_.size());
    n_categories_ = static_cast<int>(cfg.categories.size());
    for (const auto& w : cfg.categories) words_.push_back(w);
}

const std::string& Vocab::word(int id) const {
    if (id < 0 || id >= size()) throw UsageError("vocab: token id out of range");
    return words_[static_cast<size_t>(id)];
}

int Vocab::id_of(const std::string& w) const {
    for (size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] == w) return static_cast<int>(i);
    }
    throw UsageError("vocab: unknown word '" + w + "'");
}

std::vector<int> Vocab::tokenize(const std::string& text) const {
    std::vector<int> out;
    std::istringstream is(text);
    std::string w;
    while (is >> w) out.push_back(id_of(w));
    return out;
}

std::string Vocab::render(std::span<const int> tokens) const {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += word(tokens[i]);
    }
    return out;
}

World::World(WorldConfig cfg) : cfg_(std::move(cfg)), vocab_(cfg_) {
    cfg_.validate();
    const int64_t raw_dim = static_cast<int64_t>(cfg_.grid_cells()) *
                            static_cast<int64_t>(cfg_.categories.size()) *
                            static_cast<int64_t>(cfg_.colors.size());
    Rng rng(cfg_.embed_seed);
    projection_ = Tensor::randn({raw_dim, cfg_.d_img}, rng, 1.0);
    instruction_ = vocab_.tokenize("describe image in detail");
}

Scene World::generate_scene(uint64_t seed) const {
    Rng rng(seed);
    const int n = static_cast<int>(rng.uniform_int(cfg_.min_objects, cfg_.max_objects));

    // distinct cells via partial Fisher-Yates
    std::vector<int> cells(static_cast<size_t>(cfg_.grid_cells()));
    std::iota(cells.begin(), cells.end(), 0);
    for (int i = 0; i < n; ++i) {
        int j = static_cast<int>(rng.uniform_int(i, cfg_.grid_cells() - 1));
        std::swap(cells[static_cast<size_t>(i)], cells[static_cast<size_t>(j)]);
    }

    Scene scene;
    scene.seed = seed;
    std::set<std::pair<int, int>> used;
    for (int i = 0; i < n; ++i) {
        ObjectInstance obj;
        obj.position = cells[static_cast<size_t>(i)];
        do {
            obj.category = static_cast<int>(rng.uniform_int(0, static_cast<int64_t>(cfg_.categories.size()) - 1));
            obj.color = static_cast<int>(rng.uniform_int(0, static_cast<int64_t>(cfg_.colors.size()) - 1));
        } while (used.count({obj.category, obj.color}) != 0);
        used.insert({obj.category, obj.color});
        scene.objects.push_back(obj);
    }
    std::sort(scene.objects.begin(), scene.objects.end(),
              [](const ObjectInstance& a, const ObjectInstance& b) { return a.position < b.position; });
    return scene;
}

ImageEmbedding World::render_embedding(const Scene& scene) const {
    const int64_t ncat = static_cast<int64_t>(cfg_.categories.size());
    const int64_t ncol = static_cast<int64_t>(cfg_.colors.size());
    ImageEmbedding e;
    e.values.assign(static_cast<size_t>(cfg_.d_img), 0.0);
    for (const ObjectInstance& obj : scene.objects) {
        const int64_t row = (static_cast<int64_t>(obj.position) * ncat + obj.category) * ncol + obj.color;
        const double* w = projection_.v.data() + row * cfg_.d_img;
        for (int j = 0; j < cfg_.d_img; ++j) e.values[static_cast<size_t>(j)] += w[j];
    }
    return e;
}

Caption World::reference_caption(const Scene& scene) const {
    Caption cap;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        const ObjectInstance& obj = scene.objects[i];
        if (i) cap.tokens.push_back(vocab_.id_of("and"));
        cap.tokens.push_back(vocab_.id_of("a"));
        cap.tokens.push_back(vocab_.color_token(obj.color));
        cap.tokens.push_back(vocab_.category_token(obj.category));
    }
    cap.tokens.push_back(vocab_.period());
    cap.text = vocab_.render(cap.tokens);
    return cap;
}

MentionSet World::extract_mentions(const Caption& caption) const {
    MentionSet out;
    const auto& toks = caption.tokens;
    for (size_t i = 0; i + 1 < toks.size();) {
        if (vocab_.is_color(toks[i]) && vocab_.is_category(toks[i + 1])) {
            out.mentions.push_back({vocab_.category_index(toks[i + 1]), vocab_.color_index(toks[i])});
            i += 2;
        } else {
            i += 1;
        }
    }
    std::sort(out.mentions.begin(), out.mentions.end());
    return out;
}

MentionSet World::scene_mentions(const Scene& scene) const {
    MentionSet out;
    for (const ObjectInstance& obj : scene.objects) out.mentions.push_back({obj.category, obj.color});
    std::sort(out.mentions.begin(), out.mentions.end());
    return out;
}

}  // namespace halc
