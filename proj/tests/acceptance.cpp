// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Each criterion carries its runtime budget; every tolerance is
// pinned here in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rx/fuzzy.hpp"
#include "rx/netpbm.hpp"
#include "rx/pipeline.hpp"
#include "rx/rng.hpp"
#include "rx/rules.hpp"
#include "rx/uam.hpp"
#include "rx/unicode.hpp"

using namespace rx;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int number;
    const char* name;
    bool passed;
    double seconds;
    std::string detail;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

fs::path work_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "rxocr_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Charset toy_charset(int n_symbols) {
    std::vector<char32_t> cps;
    for (int i = 0; i < n_symbols; ++i) cps.push_back(static_cast<char32_t>('a' + i));
    return Charset(std::move(cps));
}

Logits random_logits(int T, int C, Rng& rng) {
    Logits l(T, C);
    for (int t = 0; t < T; ++t) {
        double sum = 0.0;
        for (int c = 0; c < C; ++c) {
            l.at(t, c) = 0.05 + rng.uniform();
            sum += l.at(t, c);
        }
        for (int c = 0; c < C; ++c) l.at(t, c) /= sum;
    }
    return l;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

// ---- criterion 1: CTC loss vs exhaustive path enumeration ------------------

Criterion criterion_ctc_oracle() {
    const double t0 = now_seconds();
    Rng rng(101);
    int checked = 0;
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 200; ++trial) {
        const int T = static_cast<int>(rng.uniform_int(1, 6));
        const int C = static_cast<int>(rng.uniform_int(2, 3));
        const int L = static_cast<int>(rng.uniform_int(1, 3));
        std::vector<int> label(L);
        for (auto& v : label) v = static_cast<int>(rng.uniform_int(0, C - 2));
        const Logits logits = random_logits(T, C, rng);
        const double brute = oracle::ctc_path_sum(logits, label);
        const CtcResult r = ctc_loss(logits, label);
        if (brute == 0.0) {
            if (r.feasible) {
                ok = false;
                detail = "feasible loss for a zero-mass label";
                break;
            }
            continue;
        }
        const double diff = std::abs(std::exp(-r.loss) - brute);
        if (diff > 1e-9) {
            ok = false;
            detail = "path-sum mismatch " + std::to_string(diff);
            break;
        }
        ++checked;
    }
    const double secs = now_seconds() - t0;
    if (ok && secs >= 5.0) {
        ok = false;
        detail = "over the 5 s budget";
    }
    if (ok) detail = std::to_string(checked) + " instances within 1e-9";
    return {1, "CTC oracle equivalence", ok, secs, detail};
}

// ---- criterion 2: gradient checks ------------------------------------------

Criterion criterion_gradients() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    // CTC gradient vs central differences, relative error < 1e-6.
    {
        Rng rng(202);
        double worst = 0.0;
        for (int trial = 0; trial < 5 && ok; ++trial) {
            const int T = 5, C = 3;
            Logits logits = random_logits(T, C, rng);
            std::vector<int> label = {0, static_cast<int>(rng.uniform_int(0, 1))};
            const CtcResult r = ctc_loss(logits, label);
            const double h = 1e-7;
            for (int t = 0; t < T && ok; ++t) {
                for (int c = 0; c < C; ++c) {
                    Logits up = logits, dn = logits;
                    up.at(t, c) += h;
                    dn.at(t, c) -= h;
                    const double fd =
                        (ctc_loss(up, label).loss - ctc_loss(dn, label).loss) / (2 * h);
                    const double an =
                        r.grad_probs[static_cast<std::size_t>(t) * C + c];
                    const double rel = std::abs(fd - an) /
                                       std::max({1.0, std::abs(fd), std::abs(an)});
                    worst = std::max(worst, rel);
                    if (rel > 1e-6) {
                        ok = false;
                        detail = "ctc grad rel err " + std::to_string(rel);
                        break;
                    }
                }
            }
        }
        if (ok) detail = "ctc grads worst rel " + std::to_string(worst);
    }

    // Full-network backward vs finite differences on sampled weights.
    if (ok) {
        ModelConfig cfg;
        cfg.input_h = 8;
        cfg.input_w = 32;
        cfg.conv_filters = {4, 8};
        cfg.rnn_units = {8, 16};
        cfg.num_classes = 4;
        Model model = init_model(cfg, 203);
        NormImage img(cfg.input_w, cfg.input_h);
        Rng rng(204);
        for (auto& v : img.pixels) v = rng.uniform();
        const std::vector<int> label = {0, 2, 1};
        const BackwardResult base = backward(model, img, label);

        const std::vector<std::string> names = {
            "conv1.kernel", "conv1.bias", "conv2.kernel", "conv2.bias",
            "lstm1.wx",     "lstm1.wh",   "lstm1.bias",   "lstm2.wx",
            "lstm2.wh",     "head.weight"};
        const double h = 1e-5;
        int checked = 0;
        double worst = 0.0;
        for (const auto& name : names) {
            Tensor& w = model.at(name);
            for (int pick = 0; pick < 3 && ok; ++pick) {
                const std::size_t k = static_cast<std::size_t>(rng.uniform_int(
                    0, static_cast<std::int64_t>(w.size()) - 1));
                const double orig = w[k];
                w[k] = orig + h;
                const double up = backward(model, img, label).loss;
                w[k] = orig - h;
                const double dn = backward(model, img, label).loss;
                w[k] = orig;
                const double fd = (up - dn) / (2 * h);
                const double an = base.grads.at(name)[k];
                const double rel =
                    std::abs(fd - an) / std::max({1.0, std::abs(fd), std::abs(an)});
                worst = std::max(worst, rel);
                ++checked;
                if (rel > 1e-5) {
                    ok = false;
                    detail = name + " rel err " + std::to_string(rel);
                }
            }
        }
        if (ok)
            detail += "; network " + std::to_string(checked) + " weights worst rel " +
                      std::to_string(worst);
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 60.0) {
        ok = false;
        detail = "over the 60 s budget";
    }
    return {2, "Gradient checks", ok, secs, detail};
}

// ---- criterion 3: beam search vs exhaustive ranking -------------------------

Criterion criterion_beam_oracle() {
    const double t0 = now_seconds();
    const Charset cs = toy_charset(2);
    bool ok = true;
    std::string detail;
    Rng rng(303);

    int ranked_checked = 0;
    for (int trial = 0; trial < 40 && ok; ++trial) {
        const int T = static_cast<int>(rng.uniform_int(2, 4));
        const Logits logits = random_logits(T, 3, rng);
        const auto expected = oracle::ctc_rank_all(logits);
        const auto got = beam_decode(logits, cs, 4096);
        if (got.size() != expected.size()) {
            ok = false;
            detail = "hypothesis count mismatch";
            break;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i].prefix != expected[i].first ||
                std::abs(got[i].log_prob - std::log(expected[i].second)) > 1e-9) {
                ok = false;
                detail = "ranking mismatch at position " + std::to_string(i);
                break;
            }
        }
        ++ranked_checked;
    }

    // Width-1 beam equals greedy when every row has a dominant argmax.
    int greedy_checked = 0;
    for (int trial = 0; trial < 300 && ok; ++trial) {
        Logits logits(6, 3);
        for (int t = 0; t < 6; ++t) {
            const int peak = static_cast<int>(rng.uniform_int(0, 2));
            const double p = rng.uniform(0.85, 0.95);
            for (int c = 0; c < 3; ++c) logits.at(t, c) = (1.0 - p) / 2.0;
            logits.at(t, peak) = p;
        }
        const auto beam = beam_decode(logits, cs, 1);
        if (beam.empty() || beam.front().text != greedy_decode(logits, cs)) {
            ok = false;
            detail = "width-1 beam diverged from greedy";
            break;
        }
        ++greedy_checked;
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 5.0) {
        ok = false;
        detail = "over the 5 s budget";
    }
    if (ok)
        detail = std::to_string(ranked_checked) + " rankings, " +
                 std::to_string(greedy_checked) + " width-1 checks";
    return {3, "Beam-search oracle", ok, secs, detail};
}

// ---- criterion 4: toy training ----------------------------------------------

const char* kToyLexicon[20] = {
    "paracetamol", "ibuprofen",  "amoxicillin", "azithromycin", "cetirizine",
    "metformin",   "omeprazole", "atorvastatin", "amlodipine",  "losartan",
    "gabapentin",  "sertraline", "prednisone",  "albuterol",    "warfarin",
    "clopidogrel", "furosemide", "pantoprazole", "montelukast",  "doxycycline"};

Criterion criterion_toy_training() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    const auto dir = work_dir("toy_training");
    {
        std::ofstream lex(dir / "lexicon.txt");
        for (const char* w : kToyLexicon) lex << w << "\n";
    }
    PipelineConfig cfg;
    cfg.seed = 20260808;
    cfg.train.seed = cfg.seed;
    cfg.train.epochs = 50;  // the fixed epoch budget
    cfg.train.batch_size = 8;
    cfg.train.learning_rate = 5e-3;
    cfg.imaging.smooth_radius = 0;
    cfg.arch.conv_filters = {16, 32};
    cfg.arch.rnn_units = {48, 64};

    cmd_gen_corpus(cfg, (dir / "lexicon.txt").string(), 20, (dir / "corpus").string());
    cfg.charset_path = (dir / "corpus" / "charset.txt").string();
    const auto outcome =
        cmd_train(cfg, (dir / "corpus" / "manifest.tsv").string(),
                  (dir / "model.rxw").string(), (dir / "history.csv").string());

    if (outcome.n_train != 360 || outcome.n_test != 40) {
        ok = false;
        detail = "unexpected split sizes";
    }

    // 50-row history CSV.
    std::vector<double> losses;
    if (ok) {
        std::ifstream hist(dir / "history.csv");
        std::string line;
        std::getline(hist, line);
        if (line != "epoch,mean_ctc_loss,test_seq_accuracy") {
            ok = false;
            detail = "bad history header";
        }
        while (std::getline(hist, line)) {
            if (line.empty()) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            losses.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        }
        if (ok && losses.size() != 50) {
            ok = false;
            detail = "history has " + std::to_string(losses.size()) + " rows";
        }
    }

    // Non-increasing 10-epoch mean loss, through the trailing block: the
    // means over epochs 1-10, 11-20, ..., 41-50 must never rise.
    if (ok) {
        auto block_mean = [&](std::size_t block) {
            double sum = 0.0;
            for (std::size_t i = block * 10; i < block * 10 + 10; ++i)
                sum += losses[i];
            return sum / 10.0;
        };
        double prev = block_mean(0);
        for (std::size_t block = 1; block < 5; ++block) {
            const double cur = block_mean(block);
            if (cur > prev + 1e-12) {
                ok = false;
                detail = "10-epoch mean loss rose in block " + std::to_string(block + 1);
                break;
            }
            prev = cur;
        }
    }

    // Lexicon-constrained decoding on the held-out split.
    double accuracy = 0.0;
    if (ok) {
        const Charset cs = Charset::from_file(cfg.charset_path);
        const Model model = load_model((dir / "model.rxw").string());
        const LexiconTrie trie = LexiconTrie::from_words(
            std::vector<std::string>(kToyLexicon, kToyLexicon + 20), cs);
        auto samples =
            load_samples((dir / "corpus" / "manifest.tsv").string(), cs);
        auto [train_set, test_set] =
            split_dataset(std::move(samples), cfg.train.train_fraction, cfg.seed);
        std::size_t hits = 0;
        for (const Sample& s : test_set) {
            const auto hyps = beam_decode(forward(model, s.image), cs, 8, &trie);
            if (!hyps.empty() && hyps.front().text == s.source_word) ++hits;
        }
        accuracy = static_cast<double>(hits) / static_cast<double>(test_set.size());
        if (accuracy < 0.90) {
            ok = false;
            detail = "test accuracy " + std::to_string(accuracy);
        }
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 900.0) {
        ok = false;
        detail = "over the 15 min budget";
    }
    if (ok) {
        std::ostringstream s;
        s << "lexicon-constrained accuracy " << accuracy << ", final loss "
          << losses.back();
        detail = s.str();
    }
    return {4, "Toy training", ok, secs, detail};
}

// ---- criterion 5: BK-tree vs linear scan -------------------------------------

Criterion criterion_fuzzy_exactness() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    Rng rng(505);
    auto random_word = [&](int lo, int hi) {
        const int len = static_cast<int>(rng.uniform_int(lo, hi));
        std::string w;
        for (int i = 0; i < len; ++i)
            w += static_cast<char>('a' + rng.uniform_int(0, 25));
        return w;
    };

    std::set<std::string> names;
    while (names.size() < 500) names.insert(random_word(4, 12));
    MedicineDb db;
    int id = 0;
    for (const auto& n : names) db.add({"m" + std::to_string(id++), n, "en", ""});
    const FuzzyIndex index(db);

    int discrepancies = 0;
    for (int probe = 0; probe < 1000; ++probe) {
        std::string q;
        if (probe % 2 == 0) {
            q = random_word(3, 13);
        } else {
            auto it = names.begin();
            std::advance(it, rng.uniform_int(0, static_cast<std::int64_t>(names.size()) - 1));
            q = *it;
            const std::size_t pos =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(q.size()) - 1));
            q[pos] = static_cast<char>('a' + rng.uniform_int(0, 25));
        }
        const std::size_t radius = static_cast<std::size_t>(rng.uniform_int(0, 3));
        const auto got = index.search(q, radius);
        std::multiset<std::pair<std::size_t, std::string>> expected;
        for (std::size_t i = 0; i < db.size(); ++i) {
            const std::size_t d = levenshtein(q, db.entry(i).name);
            if (d <= radius) expected.insert({d, db.entry(i).name});
        }
        std::multiset<std::pair<std::size_t, std::string>> got_set;
        for (const auto& c : got)
            got_set.insert({c.distance, db.entry(c.entry_index).name});
        if (got_set != expected) ++discrepancies;
    }
    if (discrepancies != 0) {
        ok = false;
        detail = std::to_string(discrepancies) + " discrepancies";
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 10.0) {
        ok = false;
        detail = "over the 10 s budget";
    }
    if (ok) detail = "1000 probes, zero discrepancies";
    return {5, "Fuzzy-search exactness", ok, secs, detail};
}

// ---- criterion 6: apriori vs brute force --------------------------------------

Criterion criterion_apriori_exactness() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    Rng rng(606);
    int checked = 0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int n_items = static_cast<int>(rng.uniform_int(1, 8));
        const int n_tx = static_cast<int>(rng.uniform_int(1, 30));
        std::vector<std::vector<int>> tx;
        for (int t = 0; t < n_tx; ++t) {
            std::vector<int> items;
            for (int i = 0; i < n_items; ++i)
                if (rng.uniform() < 0.45) items.push_back(i);
            if (items.empty())
                items.push_back(static_cast<int>(rng.uniform_int(0, n_items - 1)));
            tx.push_back(items);
        }
        const double min_support = rng.uniform(0.05, 0.9);
        const auto got = apriori(tx, min_support);
        const auto expected = oracle::apriori_brute(tx, min_support);
        if (got.size() != expected.size()) {
            ok = false;
            detail = "itemset count mismatch";
            break;
        }
        std::map<std::vector<int>, std::pair<std::size_t, double>> got_map;
        for (const auto& s : got) got_map[s.items] = {s.count, s.support};
        for (const auto& e : expected) {
            auto it = got_map.find(e.items);
            if (it == got_map.end() || it->second.first != e.count ||
                std::abs(it->second.second - e.support) > 1e-12) {
                ok = false;
                detail = "support mismatch";
                break;
            }
        }
        // Rules from the mined itemsets must satisfy their defining ratios.
        const auto rules = mine_rules(got, 0.3);
        const auto support_of = [&](const std::vector<int>& s) {
            std::size_t c = 0;
            for (const auto& t : tx)
                if (std::includes(t.begin(), t.end(), s.begin(), s.end())) ++c;
            return static_cast<double>(c) / static_cast<double>(tx.size());
        };
        for (const auto& r : rules) {
            std::vector<int> joint = r.antecedent;
            joint.insert(std::lower_bound(joint.begin(), joint.end(), r.consequent),
                         r.consequent);
            const double conf = support_of(joint) / support_of(r.antecedent);
            const double lift = conf / support_of({r.consequent});
            if (std::abs(r.confidence - conf) > 1e-12 ||
                std::abs(r.lift - lift) > 1e-12 ||
                std::abs(r.support - support_of(joint)) > 1e-12) {
                ok = false;
                detail = "rule arithmetic mismatch";
                break;
            }
        }
        ++checked;
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 30.0) {
        ok = false;
        detail = "over the 30 s budget";
    }
    if (ok) detail = std::to_string(checked) + " transaction dbs, exact";
    return {6, "Apriori exactness", ok, secs, detail};
}

// ---- criterion 7: end-to-end correction ----------------------------------------

std::string syllable_name(Rng& rng) {
    static const char* kSyll[] = {"pa", "ra",  "ce",  "ta",   "mol",    "ib",
                                  "pro", "fen", "am",  "ox",   "cil",    "lin",
                                  "az",  "my",  "cin", "met",  "for",    "min",
                                  "ol",  "pril", "statin", "zole", "dine", "ver",
                                  "lo",  "sar", "tan", "gab",  "pen",    "tin",
                                  "ser", "tra", "line", "pred", "ni",    "sone"};
    std::string w;
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 2));
    for (int i = 0; i < n; ++i) w += kSyll[rng.uniform_int(0, 35)];
    if (w.size() > 12) w.resize(12);
    return w;
}

Criterion criterion_end_to_end_correction() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    // 100 synthetic medicine names, pairwise Levenshtein >= 5 so a one-edit
    // corruption cannot reach a wrong entry.
    Rng rng(777);
    std::vector<std::string> names;
    while (names.size() < 100) {
        const std::string cand = syllable_name(rng);
        if (cand.size() < 6 || cand.size() > 9) continue;
        bool distinct = true;
        for (const auto& n : names)
            if (levenshtein(cand, n) < 5) {
                distinct = false;
                break;
            }
        if (distinct) names.push_back(cand);
    }

    const auto dir = work_dir("end_to_end");
    {
        std::ofstream meds(dir / "meds.tsv");
        for (std::size_t i = 0; i < names.size(); ++i)
            meds << "m" << i << '\t' << names[i] << "\ten\tReference entry " << i
                 << ".\n";
        // Train on the names plus filler strings across the length range so
        // reading stays compositional instead of memorized.
        std::ofstream lex(dir / "lexicon.txt");
        for (const auto& n : names) lex << n << "\n";
        Rng frng(4242);
        for (int i = 0; i < 80; ++i) {
            std::string w = syllable_name(frng);
            const std::size_t cap = 4 + static_cast<std::size_t>(frng.uniform_int(0, 8));
            if (w.size() > cap) w.resize(cap);
            if (w.size() >= 4) lex << w << "\n";
        }
    }

    PipelineConfig cfg;
    cfg.seed = 31337;
    cfg.train.seed = cfg.seed;
    cfg.train.epochs = 48;
    cfg.train.batch_size = 8;
    cfg.train.learning_rate = 1e-2;
    cfg.imaging.smooth_radius = 0;
    // Narrow glyphs leave blank columns inside a word; the page composer
    // separates words by far more than this.
    cfg.imaging.min_gap = 14;
    cfg.arch.conv_filters = {12, 24};
    cfg.arch.rnn_units = {32, 48};
    cfg.medicine_db_path = (dir / "meds.tsv").string();
    cfg.decoder.use_lexicon = false;  // corrections must come from UAM + optimiser
    cfg.decoder.beam_width = 12;
    cfg.optimizer.max_dist = 2;

    cmd_gen_corpus(cfg, (dir / "lexicon.txt").string(), 6, (dir / "corpus").string());
    cfg.charset_path = (dir / "corpus" / "charset.txt").string();
    cmd_train(cfg, (dir / "corpus" / "manifest.tsv").string(),
              (dir / "model.rxw").string(), (dir / "history.csv").string());
    cfg.model_path = (dir / "model.rxw").string();

    const Charset cs = Charset::from_file(cfg.charset_path);
    const fs::path pages = dir / "pages";
    fs::create_directories(pages);

    Rng crng(991);
    int pre_hits = 0, post_hits = 0, unresolved = 0;
    for (std::size_t i = 0; i < names.size() && ok; ++i) {
        const std::string& truth = names[i];
        // One random character corruption: substitute, insert or delete,
        // drawn from the trained charset.
        std::string corrupted = truth;
        const int op = static_cast<int>(crng.uniform_int(0, 2));
        const std::size_t pos = static_cast<std::size_t>(
            crng.uniform_int(0, static_cast<std::int64_t>(corrupted.size()) - 1));
        const char sub = static_cast<char>(
            cs.codepoint(static_cast<int>(crng.uniform_int(0, static_cast<std::int64_t>(cs.size()) - 1))));
        if (op == 0)
            corrupted[pos] = sub;
        else if (op == 1)
            corrupted.insert(corrupted.begin() + pos, sub);
        else
            corrupted.erase(corrupted.begin() + pos);

        // Draw the corrupted word on a small page and run the full pipeline.
        const NormImage canvas =
            render_word_canvas(corrupted, GlyphAtlas::builtin(), crng.next_u64());
        NormImage page(canvas.width + 40, canvas.height + 24, 1.0);
        for (int y = 0; y < canvas.height; ++y)
            for (int x = 0; x < canvas.width; ++x)
                page.at(x + 20, y + 12) =
                    std::min(page.at(x + 20, y + 12), canvas.at(x, y));
        char file[32];
        std::snprintf(file, sizeof(file), "page_%03zu.pgm", i);
        const std::string page_path = (pages / file).string();
        save_pgm(page_path, page);

        const auto out = cmd_recognize(cfg, page_path);
        const auto& segments = out.at("segments");
        if (segments.size() != 1) {
            ++unresolved;
            continue;
        }
        const auto& seg = segments[0];
        const std::string raw = seg.at("raw").get<std::string>();
        if (raw == truth) ++pre_hits;
        if (!seg.at("unresolved").get<bool>() &&
            seg.at("final").at("id").get<std::string>() == "m" + std::to_string(i))
            ++post_hits;
    }

    const double pre = pre_hits / 100.0;
    const double post = post_hits / 100.0;
    if (post < 0.95) {
        ok = false;
        detail = "post-correction accuracy " + std::to_string(post);
    } else if (post < pre) {
        ok = false;
        detail = "post below pre";
    }

    const double secs = now_seconds() - t0;
    if (ok && secs >= 300.0) {
        ok = false;
        detail = "over the 5 min budget";
    }
    if (ok) {
        std::ostringstream s;
        s << "pre " << pre << " -> post " << post;
        detail = s.str();
    }
    return {7, "End-to-end correction", ok, secs, detail};
}

// ---- criterion 8: determinism and formats ---------------------------------------

Criterion criterion_determinism() {
    const double t0 = now_seconds();
    bool ok = true;
    std::string detail;

    const auto dir = work_dir("determinism");
    {
        std::ofstream lex(dir / "lexicon.txt");
        lex << "ababa\nmomom\noba\nmeo\nbam\neom\nmabo\nboma\n";
        std::ofstream meds(dir / "meds.tsv");
        meds << "m1\tababa\ten\tDemo tablet one.\nm2\tmomom\ten\tDemo tablet two.\n";
    }
    PipelineConfig cfg;
    cfg.seed = 99;
    cfg.train.seed = 99;
    cfg.train.epochs = 4;
    cfg.train.batch_size = 8;
    cfg.train.learning_rate = 1e-2;
    cfg.imaging.smooth_radius = 0;
    cfg.arch.conv_filters = {8, 16};
    cfg.arch.rnn_units = {16, 24};
    cfg.medicine_db_path = (dir / "meds.tsv").string();

    // Same seed twice: identical corpus bytes, model bytes, history bytes.
    cmd_gen_corpus(cfg, (dir / "lexicon.txt").string(), 6, (dir / "c1").string());
    cmd_gen_corpus(cfg, (dir / "lexicon.txt").string(), 6, (dir / "c2").string());
    if (slurp(dir / "c1" / "manifest.tsv") != slurp(dir / "c2" / "manifest.tsv") ||
        slurp(dir / "c1" / "w0000_r000.pgm") != slurp(dir / "c2" / "w0000_r000.pgm")) {
        ok = false;
        detail = "gen-corpus not reproducible";
    }

    if (ok) {
        PipelineConfig t1 = cfg;
        t1.charset_path = (dir / "c1" / "charset.txt").string();
        cmd_train(t1, (dir / "c1" / "manifest.tsv").string(),
                  (dir / "m1.rxw").string(), (dir / "h1.csv").string());
        cmd_train(t1, (dir / "c1" / "manifest.tsv").string(),
                  (dir / "m2.rxw").string(), (dir / "h2.csv").string());
        if (slurp(dir / "m1.rxw") != slurp(dir / "m2.rxw") ||
            slurp(dir / "h1.csv") != slurp(dir / "h2.csv")) {
            ok = false;
            detail = "training not byte-reproducible";
        }
    }

    // RXW1 round trip is bit-exact, including through a reload.
    if (ok) {
        const Model m = load_model((dir / "m1.rxw").string());
        save_model(m, (dir / "m1_resaved.rxw").string());
        if (slurp(dir / "m1.rxw") != slurp(dir / "m1_resaved.rxw")) {
            ok = false;
            detail = "save/load round trip not bit-exact";
        }
    }

    // Identical JSON from repeated recognitions.
    if (ok) {
        PipelineConfig rc = cfg;
        rc.charset_path = (dir / "c1" / "charset.txt").string();
        rc.model_path = (dir / "m1.rxw").string();
        const NormImage canvas = render_word_canvas("ababa", GlyphAtlas::builtin(), 5);
        NormImage page(canvas.width + 30, canvas.height + 20, 1.0);
        for (int y = 0; y < canvas.height; ++y)
            for (int x = 0; x < canvas.width; ++x)
                page.at(x + 15, y + 10) = std::min(page.at(x + 15, y + 10), canvas.at(x, y));
        save_pgm((dir / "page.pgm").string(), page);
        const auto a = cmd_recognize(rc, (dir / "page.pgm").string());
        const auto b = cmd_recognize(rc, (dir / "page.pgm").string());
        if (a.dump() != b.dump()) {
            ok = false;
            detail = "recognize output not deterministic";
        }
    }

    // Split counts are exact per the 90/10 contract.
    if (ok) {
        const auto [tr100, te100] = split_indices(100, 0.9, 1);
        const auto [tr401, te401] = split_indices(401, 0.9, 2);
        if (tr100.size() != 90 || te100.size() != 10 || tr401.size() != 360 ||
            te401.size() != 41) {
            ok = false;
            detail = "split counts off";
        }
    }

    const double secs = now_seconds() - t0;
    if (ok) detail = "byte-identical reruns, exact splits";
    return {8, "Determinism & formats", ok, secs, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion (*)()> criteria = {
        criterion_ctc_oracle,       criterion_gradients,
        criterion_beam_oracle,      criterion_toy_training,
        criterion_fuzzy_exactness,  criterion_apriori_exactness,
        criterion_end_to_end_correction, criterion_determinism,
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    bool all_ok = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        const Criterion c = criteria[i]();
        std::printf("[%s] criterion %d: %s (%.1fs) - %s\n",
                    c.passed ? "PASS" : "FAIL", c.number, c.name, c.seconds,
                    c.detail.c_str());
        std::fflush(stdout);
        all_ok &= c.passed;
    }
    return all_ok ? 0 : 1;
}
