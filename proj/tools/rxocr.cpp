// rxocr: handwritten-prescription recognition pipeline CLI.
//
// Verbs: gen-corpus, train, eval, recognize, db validate, db mine-rules.
// Exit codes: 0 success, 1 usage/config error, 2 I/O error, 3 data format.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rx/error.hpp"
#include "rx/pipeline.hpp"

namespace {

rx::PipelineConfig make_config(const std::string& config_path,
                               std::optional<std::uint64_t> seed_override) {
    rx::PipelineConfig cfg;
    if (!config_path.empty()) cfg = rx::PipelineConfig::from_json_file(config_path);
    if (seed_override) {
        cfg.seed = *seed_override;
        cfg.train.seed = *seed_override;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Handwritten prescription recognition pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON pipeline config")
        ->envname("RXOCR_CONFIG");
    app.add_option("--seed", seed, "Override the config seed");

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus", "Render a synthetic corpus");
    std::string lexicon_path, out_dir;
    int n_per_word = 10;
    gen->add_option("--lexicon", lexicon_path, "One word per line")->required();
    gen->add_option("--n-per-word", n_per_word, "Renders per word");
    gen->add_option("--out", out_dir, "Output directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the recognizer");
    std::string manifest_path, model_out = "model.rxw", history_out = "history.csv";
    train_cmd->add_option("--manifest", manifest_path, "Corpus manifest TSV")->required();
    train_cmd->add_option("--model-out", model_out, "Weight file to write");
    train_cmd->add_option("--history-out", history_out, "Per-epoch CSV to write");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate on the test split");
    std::string eval_manifest;
    eval_cmd->add_option("--manifest", eval_manifest, "Corpus manifest TSV")->required();

    // recognize
    auto* rec = app.add_subcommand("recognize", "Recognize a prescription image");
    std::string image_path, dump_dir;
    rec->add_option("image", image_path, "PGM/PPM image")->required();
    rec->add_option("--dump-stages", dump_dir, "Directory for intermediate images");

    // db
    auto* db = app.add_subcommand("db", "Database utilities");
    db->require_subcommand(1);
    auto* db_validate = db->add_subcommand("validate", "Check db/transaction formats");
    auto* db_mine = db->add_subcommand("mine-rules", "Mine association rules");
    std::string rules_out = "rules.tsv";
    db_mine->add_option("--out", rules_out, "Rules TSV to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    try {
        const rx::PipelineConfig cfg = make_config(config_path, seed);
        if (*gen) {
            const auto manifest =
                rx::cmd_gen_corpus(cfg, lexicon_path, n_per_word, out_dir);
            std::cout << "wrote " << manifest.files.size() << " samples to " << out_dir
                      << "\n";
        } else if (*train_cmd) {
            const auto outcome =
                rx::cmd_train(cfg, manifest_path, model_out, history_out);
            std::cout << "trained on " << outcome.n_train << " samples, tested on "
                      << outcome.n_test << "\n";
            if (!outcome.history.empty()) {
                const auto& last = outcome.history.back();
                std::cout << "final mean_ctc_loss " << last.mean_ctc_loss
                          << ", test_seq_accuracy " << last.test_seq_accuracy << "\n";
            }
        } else if (*eval_cmd) {
            std::cout << rx::cmd_eval(cfg, eval_manifest).dump(2) << "\n";
        } else if (*rec) {
            std::optional<std::string> dump;
            if (!dump_dir.empty()) dump = dump_dir;
            std::cout << rx::cmd_recognize(cfg, image_path, dump).dump(2) << "\n";
        } else if (*db_validate) {
            std::cout << rx::cmd_db_validate(cfg) << "\n";
        } else if (*db_mine) {
            const auto n = rx::cmd_db_mine_rules(cfg, rules_out);
            std::cout << "wrote " << n << " rules to " << rules_out << "\n";
        }
    } catch (const rx::ParseError& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::DuplicateId& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::UnknownId& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::BadMagic& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::VersionMismatch& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::ShapeMismatch& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return 3;
    } catch (const rx::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const rx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
