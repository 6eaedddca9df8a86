#include "rx/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include "rx/fuzzy.hpp"
#include "rx/netpbm.hpp"
#include "rx/rng.hpp"
#include "rx/unicode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rx {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng rng(seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b + 0xD1B54A32D192ED03ULL));
    return rng.next_u64();
}

OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "adam") return OptimizerKind::Adam;
    if (name == "sgd") return OptimizerKind::Sgd;
    throw InvalidArgument("config: unknown optimizer '" + name + "'");
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig cfg;
    cfg.model_path = j.value("model", "");
    cfg.charset_path = j.value("charset", "");
    cfg.medicine_db_path = j.value("medicine_db", "");
    cfg.transactions_path = j.value("transactions", "");
    cfg.uam_db_path = j.value("uam_db", "");
    cfg.seed = j.value("seed", 0ULL);
    if (j.contains("imaging")) {
        const auto& im = j.at("imaging");
        cfg.imaging.ink_threshold = im.value("ink_threshold", cfg.imaging.ink_threshold);
        cfg.imaging.min_gap = im.value("min_gap", cfg.imaging.min_gap);
        cfg.imaging.smooth_radius = im.value("smooth_radius", cfg.imaging.smooth_radius);
    }
    if (j.contains("decoder")) {
        const auto& de = j.at("decoder");
        cfg.decoder.beam_width = de.value("beam_width", cfg.decoder.beam_width);
        cfg.decoder.use_lexicon = de.value("use_lexicon", cfg.decoder.use_lexicon);
    }
    if (j.contains("optimizer")) {
        const auto& op = j.at("optimizer");
        cfg.optimizer.max_dist = op.value("max_dist", cfg.optimizer.max_dist);
        cfg.optimizer.min_support = op.value("min_support", cfg.optimizer.min_support);
        cfg.optimizer.min_confidence =
            op.value("min_confidence", cfg.optimizer.min_confidence);
        cfg.optimizer.assoc_weight = op.value("assoc_weight", cfg.optimizer.assoc_weight);
        cfg.optimizer.validate();
    }
    if (j.contains("train")) {
        const auto& tr = j.at("train");
        cfg.train.epochs = tr.value("epochs", cfg.train.epochs);
        cfg.train.learning_rate = tr.value("learning_rate", cfg.train.learning_rate);
        cfg.train.batch_size = tr.value("batch_size", cfg.train.batch_size);
        cfg.train.train_fraction = tr.value("train_fraction", cfg.train.train_fraction);
        cfg.train.threads = tr.value("threads", cfg.train.threads);
        if (tr.contains("optimizer"))
            cfg.train.optimizer = parse_optimizer(tr.at("optimizer").get<std::string>());
    }
    if (j.contains("model_arch")) {
        const auto& ar = j.at("model_arch");
        if (ar.contains("conv_filters")) {
            const auto v = ar.at("conv_filters").get<std::vector<int>>();
            if (v.size() != 2) throw InvalidArgument("config: conv_filters needs 2 entries");
            cfg.arch.conv_filters = {v[0], v[1]};
        }
        if (ar.contains("rnn_units")) {
            const auto v = ar.at("rnn_units").get<std::vector<int>>();
            if (v.size() != 2) throw InvalidArgument("config: rnn_units needs 2 entries");
            cfg.arch.rnn_units = {v[0], v[1]};
        }
    }
    cfg.train.seed = cfg.seed;
    return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return from_json(j);
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open lexicon " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!uni::is_valid_utf8(line)) throw ParseError("lexicon: invalid UTF-8");
        words.push_back(uni::nfc(line));
    }
    return words;
}

CorpusManifest cmd_gen_corpus(const PipelineConfig& cfg,
                              const std::string& lexicon_path, int n_per_word,
                              const std::string& out_dir) {
    if (n_per_word < 1) throw InvalidArgument("gen-corpus: n_per_word must be >= 1");
    const auto words = load_lexicon(lexicon_path);
    if (words.empty()) throw InvalidArgument("gen-corpus: empty lexicon");

    const Charset charset = Charset::from_words(words);
    const GlyphAtlas& atlas = GlyphAtlas::builtin();
    fs::create_directories(out_dir);

    CorpusManifest manifest;
    std::ofstream tsv(fs::path(out_dir) / "manifest.tsv", std::ios::binary);
    if (!tsv) throw IoError("cannot write manifest in " + out_dir);
    RenderOptions render_opts;
    render_opts.smooth_radius = cfg.imaging.smooth_radius;
    for (std::size_t w = 0; w < words.size(); ++w) {
        for (int r = 0; r < n_per_word; ++r) {
            const auto seed = mix_seed(cfg.seed, w, static_cast<std::uint64_t>(r));
            const Sample sample = render_word(words[w], charset, atlas, seed, render_opts);
            char name[64];
            std::snprintf(name, sizeof(name), "w%04zu_r%03d.pgm", w, r);
            save_pgm((fs::path(out_dir) / name).string(), sample.image);

            tsv << name << '\t' << words[w] << '\t';
            for (std::size_t i = 0; i < sample.label.size(); ++i) {
                if (i) tsv << ',';
                tsv << sample.label[i];
            }
            tsv << '\n';
            manifest.files.push_back(name);
            manifest.words.push_back(words[w]);
            manifest.labels.push_back(sample.label);
        }
    }
    charset.save((fs::path(out_dir) / "charset.txt").string());

    // A small dark-on-light page composed from the first few words, handy
    // as a recognize target.
    {
        const std::size_t n_words = std::min<std::size_t>(3, words.size());
        std::vector<NormImage> canvases;
        int page_w = 20, page_h = 0;
        for (std::size_t w = 0; w < n_words; ++w) {
            canvases.push_back(render_word_canvas(
                words[w], atlas, mix_seed(cfg.seed, w, 0xFACE), render_opts));
            page_w += canvases.back().width + 24;
            page_h = std::max(page_h, canvases.back().height);
        }
        NormImage page(page_w, page_h + 24, 1.0);
        int pen = 10;
        for (const auto& canvas : canvases) {
            for (int y = 0; y < canvas.height; ++y)
                for (int x = 0; x < canvas.width; ++x)
                    page.at(pen + x, 12 + y) =
                        std::min(page.at(pen + x, 12 + y), canvas.at(x, y));
            pen += canvas.width + 24;
        }
        save_pgm((fs::path(out_dir) / "sample_page.pgm").string(), page);
    }
    return manifest;
}

CorpusManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path);
    CorpusManifest manifest;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw ParseError("manifest: expected file<TAB>word<TAB>labels", lineno);
        manifest.files.push_back(line.substr(0, tab1));
        manifest.words.push_back(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::vector<int> label;
        std::string tail = line.substr(tab2 + 1);
        std::size_t pos = 0;
        while (pos < tail.size()) {
            auto comma = tail.find(',', pos);
            if (comma == std::string::npos) comma = tail.size();
            try {
                label.push_back(std::stoi(tail.substr(pos, comma - pos)));
            } catch (const std::exception&) {
                throw ParseError("manifest: bad label index", lineno);
            }
            pos = comma + 1;
        }
        if (label.empty()) throw ParseError("manifest: empty label", lineno);
        manifest.labels.push_back(std::move(label));
    }
    return manifest;
}

namespace {

Charset charset_for_manifest(const PipelineConfig& cfg,
                             const std::string& manifest_path) {
    if (!cfg.charset_path.empty()) return Charset::from_file(cfg.charset_path);
    const fs::path sibling = fs::path(manifest_path).parent_path() / "charset.txt";
    return Charset::from_file(sibling.string());
}

}  // namespace

std::vector<Sample> load_samples(const std::string& manifest_path,
                                 const Charset& charset) {
    const CorpusManifest manifest = load_manifest(manifest_path);
    const fs::path dir = fs::path(manifest_path).parent_path();
    std::vector<Sample> samples;
    samples.reserve(manifest.files.size());
    for (std::size_t i = 0; i < manifest.files.size(); ++i) {
        Sample s;
        s.image = normalize(load_pgm((dir / manifest.files[i]).string()));
        s.label = manifest.labels[i];
        s.source_word = manifest.words[i];
        for (int idx : s.label)
            if (idx < 0 || idx >= static_cast<int>(charset.size()))
                throw ParseError("manifest: label index out of charset range");
        samples.push_back(std::move(s));
    }
    return samples;
}

TrainOutcome cmd_train(const PipelineConfig& cfg, const std::string& manifest_path,
                       const std::string& model_out, const std::string& history_out) {
    const Charset charset = charset_for_manifest(cfg, manifest_path);
    std::vector<Sample> samples = load_samples(manifest_path, charset);
    if (samples.empty()) throw InvalidArgument("train: manifest has no samples");

    auto [train_set, test_set] =
        split_dataset(std::move(samples), cfg.train.train_fraction, cfg.seed);

    ModelConfig mc;
    mc.input_h = train_set.front().image.height;
    mc.input_w = train_set.front().image.width;
    mc.conv_filters = cfg.arch.conv_filters;
    mc.rnn_units = cfg.arch.rnn_units;
    mc.num_classes = charset.num_classes();
    Model model = init_model(mc, cfg.seed);

    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    TrainResult result = train(std::move(model), train_set, test_set, tc);

    save_model(result.model, model_out);
    save_history_csv(history_out, result.history);

    TrainOutcome outcome;
    outcome.history = std::move(result.history);
    outcome.n_train = train_set.size();
    outcome.n_test = test_set.size();
    return outcome;
}

namespace {

// Everything recognize/eval needs, loaded once.
struct Resources {
    Charset charset;
    Model model;
    MedicineDb meddb;
    std::vector<AssociationRule> rules;
    std::unique_ptr<FuzzyIndex> index;
    ValidUamDb uamdb;
    std::unique_ptr<LexiconTrie> trie;
};

Resources load_resources(const PipelineConfig& cfg, bool need_model = true) {
    Resources r;
    if (cfg.charset_path.empty()) throw InvalidArgument("config: charset path not set");
    r.charset = Charset::from_file(cfg.charset_path);
    if (need_model) {
        if (cfg.model_path.empty()) throw InvalidArgument("config: model path not set");
        r.model = load_model(cfg.model_path);
        if (r.model.config.num_classes != r.charset.num_classes())
            throw ShapeMismatch("model was trained for a different charset size");
    }
    if (cfg.medicine_db_path.empty())
        throw InvalidArgument("config: medicine_db path not set");
    r.meddb = MedicineDb::load(cfg.medicine_db_path);
    r.index = std::make_unique<FuzzyIndex>(r.meddb);

    if (!cfg.transactions_path.empty()) {
        const TransactionDb tx = TransactionDb::load(cfg.transactions_path, r.meddb);
        if (!tx.transactions.empty())
            r.rules = mine_association_rules(r.meddb, tx, cfg.optimizer.min_support,
                                             cfg.optimizer.min_confidence);
    }

    if (!cfg.uam_db_path.empty()) r.uamdb = ValidUamDb::load(cfg.uam_db_path);
    for (const auto& e : r.meddb.entries()) r.uamdb.add(e.name, e.lang);

    if (cfg.decoder.use_lexicon) {
        std::vector<std::string> names;
        names.reserve(r.meddb.size());
        for (const auto& e : r.meddb.entries()) names.push_back(e.name);
        r.trie = std::make_unique<LexiconTrie>(
            LexiconTrie::from_words(names, r.charset));
    }
    return r;
}

const char* uam_status_name(UamStatus s) {
    switch (s) {
        case UamStatus::Valid: return "valid";
        case UamStatus::Invalid: return "invalid";
        case UamStatus::Repaired: return "repaired";
        default: return "unclassified";
    }
}

struct SegmentOutcome {
    std::string raw;
    UamString uam;
    std::vector<Candidate> candidates;
    bool unresolved = true;
};

// Decode one standardized crop and run the correction chain.
SegmentOutcome process_segment(const NormImage& crop, const Resources& res,
                               const PipelineConfig& cfg,
                               const std::set<std::string>& context) {
    SegmentOutcome out;
    const Logits logits = forward(res.model, crop);

    if (res.trie && res.trie->word_count() > 0) {
        const auto hyps =
            beam_decode(logits, res.charset, cfg.decoder.beam_width, res.trie.get());
        if (!hyps.empty()) out.raw = hyps.front().text;
    }
    if (out.raw.empty()) {
        const auto hyps = beam_decode(logits, res.charset, cfg.decoder.beam_width);
        out.raw = hyps.empty() ? greedy_decode(logits, res.charset)
                               : hyps.front().text;
    }
    if (out.raw.empty()) return out;  // nothing legible in this segment

    out.uam = map_segments({out.raw});
    out.uam.status = classify(out.uam, res.uamdb);
    if (out.uam.status == UamStatus::Invalid)
        out.uam = repair(std::move(out.uam), res.uamdb, cfg.optimizer.max_dist);

    out.candidates =
        optimize_prediction(out.uam.text, context, *res.index, res.rules, cfg.optimizer);
    out.unresolved = out.candidates.empty();
    return out;
}

json segment_json(const SegmentOutcome& seg, const WordSegment& box,
                  const MedicineDb& db) {
    json j;
    j["box"] = {{"x0", box.x0}, {"y0", box.y0}, {"x1", box.x1}, {"y1", box.y1}};
    j["raw"] = seg.raw;
    json uam;
    uam["status"] = uam_status_name(seg.uam.status);
    uam["text"] = seg.uam.text;
    if (seg.uam.status == UamStatus::Repaired) {
        uam["original"] = seg.uam.original;
        uam["distance"] = seg.uam.distance;
    }
    j["uam"] = uam;
    json cands = json::array();
    for (const auto& c : seg.candidates) {
        const auto& e = db.entry(c.entry_index);
        cands.push_back({{"id", e.id},
                         {"name", e.name},
                         {"distance", c.distance},
                         {"score", c.score}});
    }
    j["candidates"] = cands;
    j["unresolved"] = seg.unresolved;
    if (!seg.unresolved) {
        const auto& e = db.entry(seg.candidates.front().entry_index);
        j["final"] = {{"id", e.id},
                      {"name", e.name},
                      {"lang", e.lang},
                      {"description", e.description}};
    }
    return j;
}

}  // namespace

json cmd_recognize(const PipelineConfig& cfg, const std::string& image_path,
                   const std::optional<std::string>& dump_dir) {
    Resources res = load_resources(cfg);

    const GrayImage gray = load_image(image_path);
    const NormImage norm = normalize(gray);
    const NormImage smoothed = smooth(norm, cfg.imaging.smooth_radius);
    const auto segments =
        segment_words(smoothed, cfg.imaging.ink_threshold, cfg.imaging.min_gap);

    if (dump_dir) {
        fs::create_directories(*dump_dir);
        save_pgm((fs::path(*dump_dir) / "00_gray.pgm").string(), gray);
        save_pgm((fs::path(*dump_dir) / "01_norm.pgm").string(), norm);
        save_pgm((fs::path(*dump_dir) / "02_smooth.pgm").string(), smoothed);
        if (smoothed.width >= 3 && smoothed.height >= 3) {
            const EdgeMap edges = detect_edges(smoothed, 0.5);
            NormImage mag(edges.width, edges.height);
            for (std::size_t i = 0; i < mag.pixels.size(); ++i)
                mag.pixels[i] = std::min(1.0, edges.magnitude[i] / 4.0);
            save_pgm((fs::path(*dump_dir) / "03_edges.pgm").string(), mag);
        }
    }

    json out;
    out["image"] = image_path;
    out["segments"] = json::array();
    std::set<std::string> context;
    int seg_no = 0;
    for (const auto& seg : segments) {
        // Same framing the renderer applies: tight ink box plus the shared
        // proportional margin, so crops land in the training distribution.
        const NormImage framed =
            frame_ink(seg.image, cfg.imaging.ink_threshold, kWordFramePad);
        const NormImage std_crop =
            standardize(framed, res.model.config.input_h, res.model.config.input_w);
        if (dump_dir) {
            char name[32];
            std::snprintf(name, sizeof(name), "seg_%02d.pgm", seg_no);
            save_pgm((fs::path(*dump_dir) / name).string(), std_crop);
        }
        // The recognizer consumes ink intensity, matching the corpus renders.
        const NormImage crop = invert(std_crop);
        SegmentOutcome outcome;
        try {
            outcome = process_segment(crop, res, cfg, context);
        } catch (const Error&) {
            outcome.unresolved = true;  // a failed segment never aborts the rest
        }
        if (!outcome.unresolved)
            context.insert(res.meddb.entry(outcome.candidates.front().entry_index).id);
        out["segments"].push_back(segment_json(outcome, seg, res.meddb));
        ++seg_no;
    }
    return out;
}

json cmd_eval(const PipelineConfig& cfg, const std::string& manifest_path) {
    Resources res = load_resources(cfg);
    const Charset& charset = res.charset;
    std::vector<Sample> samples = load_samples(manifest_path, charset);
    auto [train_set, test_set] =
        split_dataset(std::move(samples), cfg.train.train_fraction, cfg.seed);

    std::size_t raw_hits = 0, corrected_hits = 0;
    double raw_dist_sum = 0.0, corrected_dist_sum = 0.0;
    std::map<std::pair<std::string, std::string>, std::size_t> confusions;

    for (const Sample& s : test_set) {
        const Logits logits = forward(res.model, s.image);
        const std::string raw = greedy_decode(logits, charset);

        std::string corrected = raw;
        if (!raw.empty()) {
            UamString u = map_segments({raw});
            u.status = classify(u, res.uamdb);
            if (u.status == UamStatus::Invalid)
                u = repair(std::move(u), res.uamdb, cfg.optimizer.max_dist);
            const auto cands =
                optimize_prediction(u.text, {}, *res.index, res.rules, cfg.optimizer);
            corrected = cands.empty() ? u.text
                                      : res.meddb.entry(cands.front().entry_index).name;
        }

        const std::string truth = uni::nfc(s.source_word);
        if (raw == truth) ++raw_hits;
        if (uni::fold_case(corrected) == uni::fold_case(truth)) ++corrected_hits;
        raw_dist_sum += static_cast<double>(levenshtein(raw, truth));
        corrected_dist_sum += static_cast<double>(levenshtein(corrected, truth));
        if (raw != truth) ++confusions[{truth, raw}];
    }

    const double n = test_set.empty() ? 1.0 : static_cast<double>(test_set.size());
    json out;
    out["n_test"] = test_set.size();
    out["sequence_accuracy_raw"] = static_cast<double>(raw_hits) / n;
    out["sequence_accuracy_corrected"] = static_cast<double>(corrected_hits) / n;
    out["mean_edit_distance_raw"] = raw_dist_sum / n;
    out["mean_edit_distance_corrected"] = corrected_dist_sum / n;
    json conf = json::array();
    for (const auto& [pair, count] : confusions)
        conf.push_back(
            {{"truth", pair.first}, {"predicted", pair.second}, {"count", count}});
    out["confusions"] = conf;
    return out;
}

std::string cmd_db_validate(const PipelineConfig& cfg) {
    if (cfg.medicine_db_path.empty())
        throw InvalidArgument("config: medicine_db path not set");
    const MedicineDb db = MedicineDb::load(cfg.medicine_db_path);
    std::size_t n_tx = 0;
    if (!cfg.transactions_path.empty()) {
        const TransactionDb tx = TransactionDb::load(cfg.transactions_path, db);
        n_tx = tx.transactions.size();
    }
    return "OK, " + std::to_string(db.size()) + " entries, " + std::to_string(n_tx) +
           " transactions";
}

std::size_t cmd_db_mine_rules(const PipelineConfig& cfg, const std::string& out_path) {
    if (cfg.medicine_db_path.empty() || cfg.transactions_path.empty())
        throw InvalidArgument("config: medicine_db and transactions paths required");
    const MedicineDb db = MedicineDb::load(cfg.medicine_db_path);
    const TransactionDb tx = TransactionDb::load(cfg.transactions_path, db);
    const auto rules = mine_association_rules(db, tx, cfg.optimizer.min_support,
                                              cfg.optimizer.min_confidence);
    save_rules_tsv(out_path, rules);
    return rules.size();
}

}  // namespace rx
