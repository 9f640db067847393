#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halc/common.hpp"
#include "halc/rng.hpp"
#include "halc/tensor.hpp"

namespace halc {

// Catalog, grid and embedding settings for the synthetic scene world.
struct WorldConfig {
    std::vector<std::string> categories = {"cat", "dog",  "bird", "fish", "horse", "sheep",
                                           "frog", "duck", "fox",  "owl",  "crab",  "deer"};
    std::vector<std::string> colors = {"red", "blue", "green", "yellow", "purple", "orange"};
    int grid_side = 4;
    int min_objects = 2;
    int max_objects = 5;
    int d_img = 48;
    uint64_t embed_seed = 0x5eedc0de;  // fixed random projection, independent of scene seeds
    int catalog_version = 1;

    int grid_cells() const { return grid_side * grid_side; }
    void validate() const;
};

struct ObjectInstance {
    int category = 0;
    int color = 0;
    int position = 0;  // grid cell, scan order

    friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct Scene {
    std::string id;
    uint64_t seed = 0;
    std::vector<ObjectInstance> objects;  // sorted by position (scan order)
};

struct ImageEmbedding {
    std::vector<double> values;
};

struct Caption {
    std::vector<int> tokens;  // surface tokens only, no begin/end markers
    std::string text;
};

struct Mention {
    int category = 0;
    int color = 0;

    friend bool operator==(const Mention&, const Mention&) = default;
    friend auto operator<=>(const Mention&, const Mention&) = default;
};

// Multiset of (category, color) mentions, kept sorted for comparisons.
struct MentionSet {
    std::vector<Mention> mentions;

    friend bool operator==(const MentionSet&, const MentionSet&) = default;
};

// Closed word-level vocabulary: markers, function words, the fixed
// instruction words, colors, then categories. Ids are stable for a given
// catalog.
class Vocab {
  public:
    explicit Vocab(const WorldConfig& cfg);

    int size() const { return static_cast<int>(words_.size()); }
    int bos() const { return 0; }
    int eos() const { return 1; }
    int period() const { return period_; }
    const std::string& word(int id) const;
    int id_of(const std::string& word) const;  // UsageError on unknown

    bool is_color(int id) const { return id >= color0_ && id < color0_ + n_colors_; }
    bool is_category(int id) const { return id >= cat0_ && id < cat0_ + n_categories_; }
    int color_index(int id) const { return id - color0_; }
    int category_index(int id) const { return id - cat0_; }
    int color_token(int color_index) const { return color0_ + color_index; }
    int category_token(int category_index) const { return cat0_ + category_index; }

    std::vector<int> tokenize(const std::string& text) const;
    std::string render(std::span<const int> tokens) const;

  private:
    std::vector<std::string> words_;
    int period_ = 0;
    int color0_ = 0, n_colors_ = 0;
    int cat0_ = 0, n_categories_ = 0;
};

// The world bundles catalog, tokenizer, grammar and the deterministic
// image-embedding projection. All member operations are pure.
class World {
  public:
    explicit World(WorldConfig cfg);

    const WorldConfig& config() const { return cfg_; }
    const Vocab& vocab() const { return vocab_; }

    // Identical (seed, config) yields a byte-identical scene.
    Scene generate_scene(uint64_t seed) const;

    // Multi-hot over (position, category, color) through a fixed random
    // projection; injective on any desk-scale corpus.
    ImageEmbedding render_embedding(const Scene& scene) const;

    // "a <color> <category>" phrases joined by "and", terminated by ".",
    // one phrase per object in grid scan order.
    Caption reference_caption(const Scene& scene) const;

    // Adjacent (color word, category word) pairs; anything else contributes
    // nothing.
    MentionSet extract_mentions(const Caption& caption) const;

    MentionSet scene_mentions(const Scene& scene) const;

    // Token sequence for the fixed generation prompt.
    const std::vector<int>& instruction() const { return instruction_; }

  private:
    WorldConfig cfg_;
    Vocab vocab_;
    Tensor projection_;  // [cells * categories * colors, d_img]
    std::vector<int> instruction_;
};

}  // namespace halc
