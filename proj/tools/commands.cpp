#include "commands.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "topiclear/coherence.hpp"
#include "topiclear/embeddings_io.hpp"
#include "topiclear/error.hpp"
#include "topiclear/kernels.hpp"
#include "topiclear/noise.hpp"
#include "topiclear/parallel.hpp"
#include "topiclear/partition_metrics.hpp"
#include "topiclear/text.hpp"
#include "topiclear/topic_words.hpp"

namespace topiclear::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string fixed3(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

// Collects a command's outputs under temporary names and renames them into
// place only once every output has been produced. Anything staged is removed
// if the command fails.
class OutputSet {
public:
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& [tmp, final_path] : staged_) fs::remove(tmp, ec);
    }

    fs::path stage(const fs::path& final_path) {
        if (final_path.has_parent_path()) fs::create_directories(final_path.parent_path());
        fs::path tmp = final_path;
        tmp += ".partial";
        staged_.emplace_back(tmp, final_path);
        return tmp;
    }

    void write_text(const fs::path& final_path, const std::string& text) {
        const auto tmp = stage(final_path);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) throw Error("I/O failure writing '" + final_path.string() + "'");
    }

    void commit() {
        for (const auto& [tmp, final_path] : staged_) fs::rename(tmp, final_path);
        committed_ = true;
    }

private:
    std::vector<std::pair<fs::path, fs::path>> staged_;
    bool committed_ = false;
};

json step_json(const ClusterStep& s) {
    json j;
    j["iteration"] = s.iteration;
    j["changed_count"] = s.changed_count;
    j["gmm_log_likelihood"] = s.log_likelihood;
    j["gmm_iterations"] = s.gmm_iterations;
    j["gmm_converged"] = s.gmm_converged;
    j["gmm_seed"] = s.gmm_seed;
    if (s.iteration > 0) j["lda_objective"] = s.lda_objective;
    j["log_likelihood_trace"] = s.log_likelihood_trace;
    return j;
}

json config_json(const PipelineConfig& c) {
    json j;
    j["k"] = c.k;
    j["d"] = c.d;
    j["max_adr_iter"] = c.max_adr_iter;
    j["seed"] = c.seed;
    j["gmm"] = {{"covariance_type", "full"},
                {"max_iter", c.gmm.max_iter},
                {"tol", c.gmm.tol},
                {"reg_covar", c.gmm.reg_covar},
                {"n_init", c.gmm.n_init},
                {"init", "kmeans++"},
                {"kmeans_iterations", c.gmm.kmeans_iterations}};
    j["lda_reg"] = c.lda_reg ? json(*c.lda_reg) : json("default");
    return j;
}

std::vector<int> sizes_of(const std::vector<int>& h, int k) {
    std::vector<int> s(static_cast<std::size_t>(k), 0);
    for (int t : h) ++s[static_cast<std::size_t>(t)];
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        double v = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || p != item.data() + item.size()) throw Error("bad --p-grid value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TOPICLEAR_SEED")) {
        std::uint64_t v = 0;
        const std::string s(env);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size()) return v;
        throw Error("TOPICLEAR_SEED must be an unsigned integer, got '" + s + "'");
    }
    return 0;
}

std::vector<double> default_p_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 8; ++i) g.push_back(i / 10.0);
    return g;
}

void cmd_extract(const ExtractOptions& opts, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    set_thread_count(opts.threads);
    const auto corpus = read_corpus(opts.corpus);
    const auto x_raw = read_embeddings(opts.embeddings);
    if (corpus.size() != x_raw.n_docs()) {
        throw Error("row-count mismatch: corpus has " + std::to_string(corpus.size()) + " documents, embeddings have " +
                    std::to_string(x_raw.n_docs()) + " rows");
    }
    const auto result = extract_topics(x_raw, opts.config);

    json res;
    res["n_docs"] = corpus.size();
    res["k"] = opts.config.k;
    res["d"] = opts.config.d;
    res["iterations"] = result.iterations;
    res["converged"] = result.converged;
    res["final_log_likelihood"] = result.gmm.log_likelihood();
    res["topic_sizes"] = sizes_of(result.assignment.h, result.assignment.k);
    res["pca_explained_variance"] = std::vector<double>(result.pca.explained_variance.data(),
                                                        result.pca.explained_variance.data() + result.pca.explained_variance.size());
    res["initial"] = step_json(result.initial);
    json hist = json::array();
    for (const auto& s : result.history) hist.push_back(step_json(s));
    res["history"] = std::move(hist);
    if (corpus.has_gold_labels()) {
        const metrics::Partition gold(corpus.gold_labels(), corpus.label_count());
        const metrics::Partition found(result.assignment.h, result.assignment.k);
        res["gold"] = {{"ari", metrics::ari(found, gold)}, {"ami", metrics::ami(found, gold)}};
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest;
    manifest["tool"] = "topiclear";
    manifest["version"] = kToolVersion;
    manifest["command"] = "extract";
    manifest["config"] = config_json(opts.config);
    manifest["seed"] = opts.config.seed;
    manifest["threads"] = opts.threads;
    manifest["simd_kernels"] = std::string(kernels::active().name);
    manifest["inputs"] = {{"corpus", {{"path", opts.corpus.string()}, {"sha256", sha256_file(opts.corpus)}}},
                          {"embeddings", {{"path", opts.embeddings.string()}, {"sha256", sha256_file(opts.embeddings)}}}};
    manifest["outputs"] = {{"assignment", opts.assignment_out.string()}, {"result", opts.result_out.string()}};
    manifest["timing_seconds"] = elapsed;

    OutputSet outputs;
    write_assignment(result.assignment, outputs.stage(opts.assignment_out));
    outputs.write_text(opts.result_out, res.dump(2) + "\n");
    outputs.write_text(opts.manifest_out, manifest.dump(2) + "\n");
    outputs.commit();

    log << "extract: " << corpus.size() << " documents, K=" << opts.config.k << ", " << result.iterations
        << " ADR iteration(s), converged=" << (result.converged ? "true" : "false") << "\n";
    if (res.contains("gold")) {
        log << "extract: ARI=" << num(res["gold"]["ari"].get<double>()) << " AMI=" << num(res["gold"]["ami"].get<double>())
            << " vs gold labels\n";
    }
}

void cmd_evaluate(const EvaluateOptions& opts, std::ostream& log) {
    const auto corpus = read_corpus(opts.corpus);
    const auto assignment = read_assignment(opts.assignment);
    if (assignment.size() != corpus.size()) {
        throw Error("row-count mismatch: assignment has " + std::to_string(assignment.size()) + " rows, corpus has " +
                    std::to_string(corpus.size()) + " documents");
    }
    auto wants = [&](const std::string& m) {
        return opts.metrics.empty() || std::find(opts.metrics.begin(), opts.metrics.end(), m) != opts.metrics.end();
    };
    for (const auto& m : opts.metrics) {
        static const std::vector<std::string> known{"ari", "ami", "c_uci", "c_npmi", "c_v", "composition", "top_words"};
        if (std::find(known.begin(), known.end(), m) == known.end()) throw Error("unknown metric '" + m + "'");
    }
    const bool explicit_clustering = !opts.metrics.empty() && (wants("ari") || wants("ami") || wants("composition"));
    if (explicit_clustering && !corpus.has_gold_labels()) {
        throw Error("clustering metrics requested but the corpus has no gold labels");
    }
    const bool clustering = corpus.has_gold_labels();

    json report;
    report["n_docs"] = corpus.size();
    report["k"] = assignment.k;
    report["topic_sizes"] = sizes_of(assignment.h, assignment.k);
    json diagnostics = json::array();

    const metrics::Partition found(assignment.h, assignment.k);
    std::optional<metrics::CompositionMatrix> composition;
    if (clustering) {
        const metrics::Partition gold(corpus.gold_labels(), corpus.label_count());
        if (wants("ari")) report["ari"] = metrics::ari(found, gold);
        if (wants("ami")) report["ami"] = metrics::ami(found, gold);
        if (wants("composition")) {
            composition = metrics::composition_matrix(assignment.h, assignment.k, gold);
            json rows = json::array();
            for (Eigen::Index t = 0; t < composition->fractions.rows(); ++t) {
                std::vector<double> r(composition->fractions.row(t).begin(), composition->fractions.row(t).end());
                rows.push_back(r);
            }
            report["composition"] = {{"label_names", corpus.label_names}, {"rows", rows}};
            for (const auto& d : composition->diagnostics) diagnostics.push_back(d);
        }
    }

    const auto tokens = TokenizedCorpus::from_corpus(corpus);
    if (wants("c_uci") || wants("c_npmi") || wants("c_v")) {
        auto words = metrics::top_words(tokens, assignment.h, assignment.k, opts.coherence_top_n);
        for (const auto& d : words.diagnostics) diagnostics.push_back(d + "; excluded from coherence");
        std::erase_if(words.topics, [](const auto& list) { return list.empty(); });
        if (wants("c_uci") || wants("c_npmi")) {
            const auto stats = metrics::build_cooccurrence(tokens, opts.uci_window);
            if (wants("c_uci")) report["c_uci"] = metrics::coherence_uci(words, stats).value;
            if (wants("c_npmi")) report["c_npmi"] = metrics::coherence_npmi(words, stats).value;
        }
        if (wants("c_v")) {
            const auto stats = metrics::build_cooccurrence(tokens, opts.cv_window);
            const auto cv = metrics::coherence_cv(words, stats);
            report["c_v"] = cv.value;
            for (const auto& d : cv.diagnostics) diagnostics.push_back(d);
        }
    }
    if (wants("top_words")) {
        const auto words = metrics::top_words(tokens, assignment.h, assignment.k, opts.display_top_n);
        json topics = json::array();
        for (const auto& list : words.topics) {
            json t = json::array();
            for (const auto& w : list) t.push_back({{"word", w.word}, {"count", w.score}});
            topics.push_back(std::move(t));
        }
        report["top_words"] = std::move(topics);
    }
    report["options"] = {{"coherence_top_n", opts.coherence_top_n},
                         {"uci_window", opts.uci_window},
                         {"cv_window", opts.cv_window},
                         {"display_top_n", opts.display_top_n}};
    report["diagnostics"] = std::move(diagnostics);

    OutputSet outputs;
    outputs.write_text(opts.report_out, report.dump(2) + "\n");
    if (opts.composition_csv) {
        if (!composition) throw Error("--composition-csv needs gold labels");
        std::string csv = "topic";
        for (int l = 0; l < composition->fractions.cols(); ++l) {
            csv += ",";
            csv += corpus.label_names.empty() ? "label" + std::to_string(l) : corpus.label_names[static_cast<std::size_t>(l)];
        }
        csv += "\n";
        for (Eigen::Index t = 0; t < composition->fractions.rows(); ++t) {
            csv += std::to_string(t);
            for (Eigen::Index l = 0; l < composition->fractions.cols(); ++l) csv += "," + num(composition->fractions(t, l));
            csv += "\n";
        }
        outputs.write_text(*opts.composition_csv, csv);
    }
    outputs.commit();

    log << "evaluate:";
    for (const char* key : {"ari", "ami", "c_uci", "c_npmi", "c_v"}) {
        if (report.contains(key)) log << " " << key << "=" << num(report[key].get<double>());
    }
    log << "\n";
}

void cmd_noise_study(const NoiseStudyCliOptions& opts, std::ostream& log) {
    const auto corpus = read_corpus(opts.corpus);
    if (!corpus.has_gold_labels()) throw Error("noise study needs gold labels in the corpus");
    const metrics::Partition gold(corpus.gold_labels(), corpus.label_count());

    metrics::NoiseStudyOptions o;
    o.p_grid = opts.p_grid.empty() ? default_p_grid() : opts.p_grid;
    o.replicates = opts.replicates;
    o.seed = opts.seed;
    o.coherence = opts.coherence;
    o.n_top = opts.n_top;
    o.uci_window = opts.uci_window;
    o.cv_window = opts.cv_window;

    std::optional<TokenizedCorpus> tokens;
    if (opts.coherence) tokens = TokenizedCorpus::from_corpus(corpus);
    const auto study = metrics::run_noise_study(gold, tokens ? &*tokens : nullptr, o);

    std::string csv = "p_n,replicate,ari,ami,c_uci,c_npmi,c_v\n";
    for (const auto& r : study.rows) {
        csv += num(r.p_n) + "," + std::to_string(r.replicate) + "," + num(r.ari) + "," + num(r.ami);
        if (opts.coherence) {
            csv += "," + num(r.c_uci) + "," + num(r.c_npmi) + "," + num(r.c_v) + "\n";
        } else {
            csv += ",,,\n";
        }
    }

    auto opt_json = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json summary;
    summary["n_docs"] = corpus.size();
    summary["k"] = gold.k;
    summary["p_grid"] = o.p_grid;
    summary["replicates"] = o.replicates;
    summary["seed"] = o.seed;
    summary["coherence"] = opts.coherence;
    summary["spearman_rho"] = {{"ari", opt_json(study.rho_ari)},
                               {"ami", opt_json(study.rho_ami)},
                               {"c_uci", opt_json(study.rho_c_uci)},
                               {"c_npmi", opt_json(study.rho_c_npmi)},
                               {"c_v", opt_json(study.rho_c_v)}};
    json per_p = json::array();
    for (std::size_t i = 0; i < o.p_grid.size(); ++i) {
        double sums[5] = {0, 0, 0, 0, 0};
        for (int r = 0; r < o.replicates; ++r) {
            const auto& row = study.rows[i * static_cast<std::size_t>(o.replicates) + static_cast<std::size_t>(r)];
            sums[0] += row.ari;
            sums[1] += row.ami;
            sums[2] += row.c_uci;
            sums[3] += row.c_npmi;
            sums[4] += row.c_v;
        }
        json e;
        e["p_n"] = o.p_grid[i];
        e["mean_ari"] = sums[0] / o.replicates;
        e["mean_ami"] = sums[1] / o.replicates;
        if (opts.coherence) {
            e["mean_c_uci"] = sums[2] / o.replicates;
            e["mean_c_npmi"] = sums[3] / o.replicates;
            e["mean_c_v"] = sums[4] / o.replicates;
        }
        e["mean_agreement"] = study.mean_agreement[i];
        e["expected_agreement"] = metrics::expected_noise_agreement(o.p_grid[i], gold.k);
        per_p.push_back(std::move(e));
    }
    summary["per_p"] = std::move(per_p);
    summary["diagnostics"] = study.diagnostics;

    OutputSet outputs;
    outputs.write_text(opts.csv_out, csv);
    outputs.write_text(opts.summary_out, summary.dump(2) + "\n");
    outputs.commit();

    log << "noise-study: " << study.rows.size() << " rows; rho(p_n, ARI)="
        << (study.rho_ari ? num(*study.rho_ari) : "undefined")
        << " rho(p_n, AMI)=" << (study.rho_ami ? num(*study.rho_ami) : "undefined") << "\n";
}

void cmd_topwords(const TopwordsOptions& opts, std::ostream& out) {
    const auto corpus = read_corpus(opts.corpus);
    const auto assignment = read_assignment(opts.assignment);
    if (assignment.size() != corpus.size()) {
        throw Error("row-count mismatch: assignment has " + std::to_string(assignment.size()) + " rows, corpus has " +
                    std::to_string(corpus.size()) + " documents");
    }
    const auto tokens = TokenizedCorpus::from_corpus(corpus);
    const auto words = metrics::top_words(tokens, assignment.h, assignment.k, opts.n);
    const auto sizes = sizes_of(assignment.h, assignment.k);
    for (const auto& d : words.diagnostics) out << "warning: " << d << "\n";

    std::string csv = "topic,rank,word,count\n";
    for (std::size_t t = 0; t < words.topics.size(); ++t) {
        out << "topic " << t << " (" << sizes[t] << " docs):";
        for (std::size_t r = 0; r < words.topics[t].size(); ++r) {
            const auto& w = words.topics[t][r];
            out << " " << w.word;
            csv += std::to_string(t) + "," + std::to_string(r + 1) + "," + w.word + "," + num(w.score) + "\n";
        }
        out << "\n";
    }

    OutputSet outputs;
    if (opts.csv_out) outputs.write_text(*opts.csv_out, csv);

    if (opts.delta_tfidf_topic) {
        const auto ranked = metrics::delta_tfidf(tokens, assignment.h, assignment.k, *opts.delta_tfidf_topic, opts.n);
        out << "delta-tfidf topic " << *opts.delta_tfidf_topic << ":";
        for (const auto& w : ranked) out << " " << w.word;
        out << "\n";
    }
    if (opts.match) {
        const auto other = read_assignment(*opts.match);
        if (other.size() != corpus.size()) throw Error("--match assignment does not cover the corpus");
        const auto matches = metrics::greedy_match(tokens, assignment, other);
        std::string mcsv = "topic,matched_topic,sim\n";
        out << "greedy match (topic -> other, sim):\n";
        for (const auto& m : matches) {
            out << "  " << m.a << " -> " << m.b << "  " << fixed3(m.similarity) << "\n";
            mcsv += std::to_string(m.a) + "," + std::to_string(m.b) + "," + fixed3(m.similarity) + "\n";
        }
        if (opts.match_csv_out) outputs.write_text(*opts.match_csv_out, mcsv);
    }
    outputs.commit();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topic extraction from document embeddings", "topiclear"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::uint64_t seed = 0;
    bool seed_given = false;

    ExtractOptions ex;
    std::optional<double> lda_reg;
    auto* extract = app.add_subcommand("extract", "Extract topics and write assignment, result and manifest");
    extract->add_option("--corpus", ex.corpus, "JSON-Lines corpus")->required()->check(CLI::ExistingFile);
    extract->add_option("--embeddings", ex.embeddings, "Binary embedding file (stage raw)")->required()->check(CLI::ExistingFile);
    extract->add_option("--k", ex.config.k, "Number of topics K")->capture_default_str();
    extract->add_option("--d", ex.config.d, "PCA feature dimension D")->capture_default_str();
    extract->add_option("--max-iter", ex.config.max_adr_iter, "Maximum discriminant/recluster rounds")->capture_default_str();
    extract->add_option("--gmm-max-iter", ex.config.gmm.max_iter, "EM iteration cap")->capture_default_str();
    extract->add_option("--gmm-tol", ex.config.gmm.tol, "EM tolerance on mean log-likelihood")->capture_default_str();
    extract->add_option("--reg-covar", ex.config.gmm.reg_covar, "Covariance diagonal ridge")->capture_default_str();
    extract->add_option("--n-init", ex.config.gmm.n_init, "EM restarts per clustering")->capture_default_str();
    extract->add_option("--lda-reg", lda_reg, "Ridge on S_W (default 1e-6 trace(S_W)/D)");
    extract->add_option("--seed", seed, "Random seed (default $TOPICLEAR_SEED or 0)");
    extract->add_option("--threads", ex.threads, "Worker threads")->capture_default_str();
    extract->add_option("--assignment-out", ex.assignment_out)->capture_default_str();
    extract->add_option("--result-out", ex.result_out)->capture_default_str();
    extract->add_option("--manifest-out", ex.manifest_out)->capture_default_str();

    EvaluateOptions ev;
    std::string ev_metrics;
    auto* evaluate = app.add_subcommand("evaluate", "Score an assignment (ARI, AMI, coherence, composition)");
    evaluate->add_option("--assignment", ev.assignment)->required()->check(CLI::ExistingFile);
    evaluate->add_option("--corpus", ev.corpus)->required()->check(CLI::ExistingFile);
    evaluate->add_option("--metrics", ev_metrics, "Comma list of ari,ami,c_uci,c_npmi,c_v,composition,top_words");
    evaluate->add_option("--top-n", ev.coherence_top_n, "Top words per topic for coherence")->capture_default_str();
    evaluate->add_option("--display-top", ev.display_top_n, "Top words per topic in the report")->capture_default_str();
    evaluate->add_option("--uci-window", ev.uci_window)->capture_default_str();
    evaluate->add_option("--cv-window", ev.cv_window)->capture_default_str();
    evaluate->add_option("--out", ev.report_out, "Report JSON")->capture_default_str();
    std::string composition_csv;
    evaluate->add_option("--composition-csv", composition_csv, "Write the composition matrix as CSV");

    NoiseStudyCliOptions ns;
    std::string grid;
    bool no_coherence = false;
    auto* noise = app.add_subcommand("noise-study", "Uniform label-noise robustness study on gold labels");
    noise->add_option("--corpus", ns.corpus)->required()->check(CLI::ExistingFile);
    noise->add_option("--p-grid", grid, "Comma list of noise levels (default 0,0.1,...,0.8)");
    noise->add_option("--replicates", ns.replicates)->capture_default_str();
    noise->add_option("--seed", seed, "Random seed (default $TOPICLEAR_SEED or 0)");
    noise->add_flag("--no-coherence", no_coherence, "Skip coherence measures");
    noise->add_option("--top-n", ns.n_top)->capture_default_str();
    noise->add_option("--uci-window", ns.uci_window)->capture_default_str();
    noise->add_option("--cv-window", ns.cv_window)->capture_default_str();
    noise->add_option("--out-csv", ns.csv_out)->capture_default_str();
    noise->add_option("--summary", ns.summary_out)->capture_default_str();

    TopwordsOptions tw;
    int delta_topic = -1;
    std::string match, tw_csv, match_csv;
    auto* topwords = app.add_subcommand("topwords", "Top words per topic, delta TF-IDF and greedy topic matching");
    topwords->add_option("--assignment", tw.assignment)->required()->check(CLI::ExistingFile);
    topwords->add_option("--corpus", tw.corpus)->required()->check(CLI::ExistingFile);
    topwords->add_option("--n", tw.n, "Words per topic")->capture_default_str();
    topwords->add_option("--delta-tfidf", delta_topic, "Topic index for contrastive words");
    topwords->add_option("--match", match, "Other assignment to match topics against")->check(CLI::ExistingFile);
    topwords->add_option("--out-csv", tw_csv, "Top words as CSV");
    topwords->add_option("--match-csv", match_csv, "Greedy matching as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        seed_given = app.got_subcommand(extract) ? extract->count("--seed") > 0 : noise->count("--seed") > 0;
        const std::uint64_t effective_seed = seed_given ? seed : default_seed();
        if (app.got_subcommand(extract)) {
            ex.config.seed = effective_seed;
            ex.config.lda_reg = lda_reg;
            cmd_extract(ex, err);
        } else if (app.got_subcommand(evaluate)) {
            ev.metrics = split_list(ev_metrics);
            if (!composition_csv.empty()) ev.composition_csv = composition_csv;
            cmd_evaluate(ev, err);
        } else if (app.got_subcommand(noise)) {
            ns.seed = effective_seed;
            ns.coherence = !no_coherence;
            if (!grid.empty()) ns.p_grid = parse_grid(grid);
            cmd_noise_study(ns, err);
        } else if (app.got_subcommand(topwords)) {
            if (delta_topic >= 0) tw.delta_tfidf_topic = delta_topic;
            if (!match.empty()) tw.match = match;
            if (!tw_csv.empty()) tw.csv_out = tw_csv;
            if (!match_csv.empty()) tw.match_csv_out = match_csv;
            cmd_topwords(tw, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace topiclear::cli
