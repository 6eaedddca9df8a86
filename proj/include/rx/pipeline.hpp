#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rx/charset.hpp"
#include "rx/corpus.hpp"
#include "rx/ctc.hpp"
#include "rx/meddb.hpp"
#include "rx/model.hpp"
#include "rx/predict.hpp"
#include "rx/train.hpp"
#include "rx/uam.hpp"

#include <json.hpp>

namespace rx {

struct ImagingParams {
    double ink_threshold = 0.5;
    int min_gap = 8;
    int smooth_radius = 1;
};

struct DecoderParams {
    int beam_width = 8;
    bool use_lexicon = true;
};

// Layer sizes for a fresh model; the defaults are the full recognizer
// (conv 32/64, LSTM 64/128).
struct ModelArch {
    std::array<int, 2> conv_filters = {32, 64};
    std::array<int, 2> rnn_units = {64, 128};
};

struct PipelineConfig {
    std::string model_path;
    std::string charset_path;
    std::string medicine_db_path;
    std::string transactions_path;
    std::string uam_db_path;
    ImagingParams imaging;
    DecoderParams decoder;
    OptimizerConfig optimizer;
    TrainConfig train;
    ModelArch arch;
    std::uint64_t seed = 0;

    static PipelineConfig from_json_file(const std::string& path);
    static PipelineConfig from_json(const nlohmann::json& j);
};

// ---- gen-corpus -----------------------------------------------------------

struct CorpusManifest {
    std::vector<std::string> files;
    std::vector<std::string> words;
    std::vector<std::vector<int>> labels;
};

// Renders n_per_word samples for each lexicon word into out_dir as PGMs,
// writes manifest.tsv and charset.txt. Deterministic per seed.
CorpusManifest cmd_gen_corpus(const PipelineConfig& cfg,
                              const std::string& lexicon_path, int n_per_word,
                              const std::string& out_dir);

// One word per non-empty line, '#' comments skipped.
std::vector<std::string> load_lexicon(const std::string& path);

CorpusManifest load_manifest(const std::string& path);

// Reads the PGM samples referenced by a manifest (paths relative to it).
std::vector<Sample> load_samples(const std::string& manifest_path,
                                 const Charset& charset);

// ---- train / eval ----------------------------------------------------------

struct TrainOutcome {
    std::vector<EpochStats> history;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
};

// 90/10 split (config.train.train_fraction), trains per config, writes the
// RXW1 model and the history CSV.
TrainOutcome cmd_train(const PipelineConfig& cfg, const std::string& manifest_path,
                       const std::string& model_out, const std::string& history_out);

// Decodes the test split raw and corrected; returns the metrics document.
nlohmann::json cmd_eval(const PipelineConfig& cfg, const std::string& manifest_path);

// ---- recognize --------------------------------------------------------------

// Full chain on one image; returns the structured output document.
// dump_dir, when set, receives the intermediate stage images.
nlohmann::json cmd_recognize(const PipelineConfig& cfg, const std::string& image_path,
                             const std::optional<std::string>& dump_dir = std::nullopt);

// ---- db ----------------------------------------------------------------------

// Returns "OK, N entries, M transactions"; throws on any format violation.
std::string cmd_db_validate(const PipelineConfig& cfg);

// Runs apriori + rule mining and writes the rules TSV; returns rule count.
std::size_t cmd_db_mine_rules(const PipelineConfig& cfg, const std::string& out_path);

}  // namespace rx
