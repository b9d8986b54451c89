// Command-line front end: extract -> build -> fit -> assess / communities,
// plus prior/fixed-truth simulation.  JSON config files with flag overrides;
// exit codes: 0 ok, 2 validation error, 3 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mlsn/assess.hpp"
#include "mlsn/community.hpp"
#include "mlsn/community_detect.hpp"
#include "mlsn/io.hpp"

namespace fs = std::filesystem;
using mlsn::io::ordered_json;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_exists(const fs::path& p) {
    if (!fs::exists(p)) throw ValidationError("path does not exist: " + p.string());
}

// Values from --config JSON fill in options the user did not pass explicitly.
void apply_config(CLI::App* cmd, const std::string& config_path) {
    if (config_path.empty()) return;
    require_exists(config_path);
    std::ifstream f(config_path);
    const ordered_json cfg = ordered_json::parse(f);
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt || opt->count() > 0) continue;
        std::vector<std::string> args;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("true");
            else continue;
        } else if (value.is_string()) {
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(value.dump());
        }
        opt->add_result(args[0]);
        opt->run_callback();
    }
}

void write_run_manifest(const fs::path& out, const std::string& command,
                        const ordered_json& options) {
    ordered_json j;
    j["command"] = command;
    j["options"] = options;
    std::ofstream f(out / "run_manifest.json", std::ios::binary);
    f << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- extract --

int cmd_extract(const std::string& wav_dir, const std::string& out_dir) {
    require_exists(wav_dir);
    fs::create_directories(out_dir);
    std::vector<fs::path> wavs;
    for (const auto& entry : fs::directory_iterator(wav_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            wavs.push_back(entry.path());
    std::sort(wavs.begin(), wavs.end());

    ordered_json manifest;
    manifest["tracks"] = ordered_json::array();
    manifest["failures"] = ordered_json::array();
    if (wavs.empty()) std::cerr << "warning: no WAV files in " << wav_dir << "\n";
    for (const fs::path& wav : wavs) {
        try {
            const mlsn::Waveform w = mlsn::read_wav(wav.string());
            const auto series = mlsn::extract_all(w);
            const fs::path out = fs::path(out_dir) / (wav.stem().string() + ".csv");
            mlsn::io::write_features(out, {series.begin(), series.end()});
            ordered_json t;
            t["song_id"] = wav.stem().string();
            t["file"] = out.filename().string();
            t["frames"] = series[0].values.size();
            manifest["tracks"].push_back(t);
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << wav << ": " << e.what() << "\n";
            ordered_json t;
            t["file"] = wav.filename().string();
            t["error"] = e.what();
            manifest["failures"].push_back(t);
        }
    }
    std::ofstream f(fs::path(out_dir) / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << "\n";
    ordered_json opts;
    opts["wav_dir"] = wav_dir;
    write_run_manifest(out_dir, "extract", opts);
    return 0;
}

// ------------------------------------------------------------------ build --

int cmd_build(const std::string& features_dir, const std::string& songs_csv, int k, int m,
              const std::string& distance, const std::string& out_dir) {
    require_exists(features_dir);
    const mlsn::DistanceKind kind = mlsn::parse_distance(distance);
    fs::create_directories(out_dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(features_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.size() < 2) throw ValidationError("need at least 2 feature files");

    std::vector<std::string> song_ids;
    std::vector<std::vector<mlsn::FeatureCurve>> by_metric(4);
    std::vector<mlsn::FeatureCurve> all_curves;
    for (const fs::path& file : files) {
        const auto series = mlsn::io::read_features(file);
        const std::string id = file.stem().string();
        song_ids.push_back(id);
        for (int q = 0; q < 4; ++q) {
            mlsn::FeatureCurve c;
            c.song_id = id;
            c.metric = static_cast<mlsn::Metric>(q);
            c.values = mlsn::standardize(mlsn::smooth_resample(series[q], m));
            by_metric[q].push_back(c);
            all_curves.push_back(std::move(c));
        }
    }
    mlsn::io::write_curves(fs::path(out_dir) / "curves.csv", all_curves);

    std::vector<mlsn::DistanceMatrix> dists;
    std::vector<std::string> layer_labels;
    for (int q = 0; q < 4; ++q) {
        dists.push_back(mlsn::distance_matrix(by_metric[q], kind));
        layer_labels.push_back(mlsn::metric_name(static_cast<mlsn::Metric>(q)));
        mlsn::io::write_distance_matrix(
            fs::path(out_dir) / ("distance_" + layer_labels.back() + ".csv"), dists.back());
    }
    const mlsn::MultilayerNetwork net =
        mlsn::build_multilayer(dists, k, song_ids, layer_labels);
    net.validate();
    mlsn::io::write_network(fs::path(out_dir) / "network", net);

    if (!songs_csv.empty()) {
        require_exists(songs_csv);
        std::vector<mlsn::SongRecord> songs = mlsn::io::read_song_table(songs_csv);
        if (songs.size() != song_ids.size())
            throw ValidationError("song table row count does not match feature files");
        // Align rows with the feature-file order.
        std::vector<mlsn::SongRecord> ordered;
        for (const std::string& id : song_ids) {
            auto it = std::find_if(songs.begin(), songs.end(),
                                   [&](const mlsn::SongRecord& s) { return s.song_id == id; });
            if (it == songs.end()) throw ValidationError("song table missing id: " + id);
            ordered.push_back(*it);
        }
        std::vector<std::string> warnings;
        const mlsn::DyadicCovariates cov = mlsn::assemble_covariates(ordered, &warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
        mlsn::io::write_covariates(fs::path(out_dir) / "covariates", cov);
    }
    ordered_json opts;
    opts["features_dir"] = features_dir;
    opts["songs"] = songs_csv;
    opts["k"] = k;
    opts["m"] = m;
    opts["distance"] = distance;
    write_run_manifest(out_dir, "build", opts);
    return 0;
}

// -------------------------------------------------------------------- fit --

int cmd_fit(const std::string& network_json, const std::string& covariates_json,
            const std::string& variant_name, const std::string& preset, long burn, long keep,
            int thin, std::uint64_t seed, int chains, int blocks_c, bool approx_alpha,
            const std::string& out_dir) {
    require_exists(network_json);
    const mlsn::Variant variant = mlsn::parse_variant(variant_name);
    const mlsn::MultilayerNetwork net = mlsn::io::read_network(network_json);

    std::optional<mlsn::DyadicCovariates> cov;
    if (!covariates_json.empty()) {
        require_exists(covariates_json);
        cov = mlsn::io::read_covariates(covariates_json);
        if (cov->n != net.n) throw ValidationError("covariate/network size mismatch");
    }

    mlsn::ChainConfig config;
    config.variant = variant;
    config.hyper = mlsn::default_hyperparameters(variant);
    config.hyper.exact_alpha = !approx_alpha;
    if (preset == "paper") {
        config.burn = 200000;
        config.keep = 1000000;
        config.thin = 20;
    } else if (!preset.empty() && preset != "desk") {
        throw ValidationError("unknown preset: " + preset);
    }
    if (burn >= 0) config.burn = burn;
    if (keep > 0) config.keep = keep;
    if (thin > 0) config.thin = thin;
    config.seed = seed;

    if (mlsn::has_blocks(variant))
        config.hyper.C = (blocks_c > 0) ? blocks_c : mlsn::choose_block_count(net);
    if (!cov && variant == mlsn::Variant::SMN) {
        // Covariate-free reduced predictor: the layer intercepts drop out.
        config.reduced_mu = true;
        std::cerr << "note: covariate-free reduced predictor mode (no mu_k)\n";
    }
    if (!cov && mlsn::has_covariates(variant))
        std::cerr << "note: no covariates supplied; fitting " << variant_name
                  << " with p = 0\n";

    fs::create_directories(out_dir);
    const mlsn::DyadicCovariates* cov_ptr = cov ? &*cov : nullptr;
    std::vector<std::future<mlsn::ChainArchive>> futures;
    for (int c = 0; c < chains; ++c) {
        mlsn::ChainConfig cc = config;
        cc.stream = static_cast<std::uint64_t>(c);
        futures.push_back(std::async(std::launch::async, [&net, cov_ptr, cc] {
            return mlsn::run_chain(net, cov_ptr, cc);
        }));
    }
    for (int c = 0; c < chains; ++c) {
        const mlsn::ChainArchive arc = futures[c].get();
        const fs::path dir = (chains == 1) ? fs::path(out_dir)
                                           : fs::path(out_dir) / ("chain_" + std::to_string(c + 1));
        mlsn::io::write_archive(dir, arc);
    }
    ordered_json opts;
    opts["network"] = network_json;
    opts["covariates"] = covariates_json;
    opts["variant"] = variant_name;
    opts["burn"] = config.burn;
    opts["keep"] = config.keep;
    opts["thin"] = config.thin;
    opts["seed"] = config.seed;
    opts["chains"] = chains;
    opts["C"] = config.hyper.C;
    opts["exact_alpha"] = config.hyper.exact_alpha;
    write_run_manifest(out_dir, "fit", opts);
    return 0;
}

// ----------------------------------------------------------------- assess --

int cmd_assess(const std::string& archive_dir, const std::string& network_json,
               const std::string& covariates_json, std::uint64_t seed,
               const std::string& out_dir) {
    require_exists(archive_dir);
    require_exists(network_json);
    const mlsn::ChainArchive arc = mlsn::io::read_archive(archive_dir);
    const mlsn::MultilayerNetwork net = mlsn::io::read_network(network_json);
    std::optional<mlsn::DyadicCovariates> cov;
    if (!covariates_json.empty()) {
        require_exists(covariates_json);
        cov = mlsn::io::read_covariates(covariates_json);
    }
    const mlsn::DyadicCovariates* cov_ptr = cov ? &*cov : nullptr;

    fs::create_directories(out_dir);
    mlsn::Rng rng(seed);
    const mlsn::PPCReport rep = mlsn::ppc(arc, net, cov_ptr, rng);
    {
        std::ofstream f(fs::path(out_dir) / "ppc.csv", std::ios::binary);
        f << "statistic,layer,predictive_mean,observed,rmse,excluded_draws\n";
        for (int q = 0; q < mlsn::kNumNetStats; ++q) {
            for (int k = 0; k < rep.K; ++k)
                f << mlsn::net_stat_name(static_cast<mlsn::NetStat>(q)) << ","
                  << net.layer_labels[k] << ","
                  << mlsn::io::format_double(rep.predictive_mean[q][k]) << ","
                  << mlsn::io::format_double(rep.observed[q][k]) << ","
                  << mlsn::io::format_double(rep.rmse[q][k]) << "," << rep.excluded_draws[q][k]
                  << "\n";
            f << mlsn::net_stat_name(static_cast<mlsn::NetStat>(q)) << ",average,,,"
              << mlsn::io::format_double(rep.layer_avg_rmse[q]) << ",\n";
        }
    }
    const mlsn::FitMetrics fm = mlsn::metrics_over_chain(arc, net, cov_ptr);
    ordered_json j;
    j["AUC"] = fm.auc;
    j["AUC_defined"] = fm.auc_defined;
    j["BS"] = fm.brier;
    j["LL"] = fm.log_loss;
    j["DIC"] = fm.dic;
    j["WAIC"] = fm.waic;
    {
        std::ofstream f(fs::path(out_dir) / "metrics.json", std::ios::binary);
        f << j.dump(2) << "\n";
        std::ofstream c(fs::path(out_dir) / "metrics.csv", std::ios::binary);
        c << "AUC,BS,LL,DIC,WAIC\n"
          << mlsn::io::format_double(fm.auc) << "," << mlsn::io::format_double(fm.brier) << ","
          << mlsn::io::format_double(fm.log_loss) << "," << mlsn::io::format_double(fm.dic)
          << "," << mlsn::io::format_double(fm.waic) << "\n";
    }
    ordered_json opts;
    opts["archive"] = archive_dir;
    opts["network"] = network_json;
    opts["covariates"] = covariates_json;
    opts["seed"] = seed;
    write_run_manifest(out_dir, "assess", opts);
    return 0;
}

// ------------------------------------------------------------ communities --

int cmd_communities(const std::string& archive_dir, const std::string& albums_csv,
                    const std::string& network_json, const std::string& out_dir) {
    require_exists(archive_dir);
    const mlsn::ChainArchive arc = mlsn::io::read_archive(archive_dir);
    if (!mlsn::has_blocks(arc.config.variant))
        throw ValidationError("communities requires an SMN-C-SB archive");

    std::vector<std::string> node_labels;
    if (!network_json.empty()) {
        require_exists(network_json);
        node_labels = mlsn::io::read_network(network_json).node_labels;
    } else {
        for (int i = 0; i < arc.n; ++i) node_labels.push_back("node_" + std::to_string(i + 1));
    }

    fs::create_directories(out_dir);
    for (int k = 0; k < arc.K; ++k) {
        const std::vector<int> part = mlsn::dahl_partition(arc, k);
        std::ofstream f(fs::path(out_dir) / ("partition_layer_" + std::to_string(k + 1) + ".csv"),
                        std::ios::binary);
        f << "node_id,label\n";
        for (int i = 0; i < arc.n; ++i) f << node_labels[i] << "," << part[i] + 1 << "\n";
        const mlsn::CoClusterMatrix cc = mlsn::coclustering(arc, k);
        std::ofstream g(fs::path(out_dir) / ("cocluster_layer_" + std::to_string(k + 1) + ".csv"),
                        std::ios::binary);
        for (int i = 0; i < cc.n; ++i) {
            for (int j = 0; j < cc.n; ++j)
                g << (j ? "," : "") << mlsn::io::format_double(cc.at(i, j));
            g << "\n";
        }
    }
    {
        const std::vector<double> md = mlsn::posterior_mean_delta(arc);
        std::ofstream f(fs::path(out_dir) / "posterior_mean_delta.csv", std::ios::binary);
        f << "node_id";
        for (int k = 0; k < arc.K; ++k) f << ",delta_layer_" << k + 1;
        f << "\n";
        for (int i = 0; i < arc.n; ++i) {
            f << node_labels[i];
            for (int k = 0; k < arc.K; ++k)
                f << "," << mlsn::io::format_double(md[static_cast<std::size_t>(i) * arc.K + k]);
            f << "\n";
        }
    }
    if (!albums_csv.empty()) {
        require_exists(albums_csv);
        // Two-column CSV (node_id, album); order must match the node labels.
        std::ifstream f(albums_csv);
        std::string line;
        std::getline(f, line);  // header
        std::vector<int> albums;
        std::vector<std::string> seen;
        while (std::getline(f, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto comma = line.find(',');
            const std::string album = (comma == std::string::npos) ? line : line.substr(comma + 1);
            auto it = std::find(seen.begin(), seen.end(), album);
            if (it == seen.end()) {
                seen.push_back(album);
                albums.push_back(static_cast<int>(seen.size()) - 1);
            } else {
                albums.push_back(static_cast<int>(it - seen.begin()));
            }
        }
        if (static_cast<int>(albums.size()) != arc.n)
            throw ValidationError("album table row count does not match archive");
        const std::vector<double> table = mlsn::album_ari_table(arc, albums);
        std::ofstream g(fs::path(out_dir) / "ari_table.csv", std::ios::binary);
        g << "layer,ari\n";
        for (int k = 0; k < arc.K; ++k)
            g << k + 1 << "," << mlsn::io::format_double(table[k]) << "\n";
    }
    ordered_json opts;
    opts["archive"] = archive_dir;
    opts["albums"] = albums_csv;
    write_run_manifest(out_dir, "communities", opts);
    return 0;
}

// --------------------------------------------------------------- simulate --

int cmd_simulate(const std::string& variant_name, int n, int K, int p, int d, int blocks_c,
                 std::uint64_t seed, const std::string& truth_json,
                 const std::string& covariates_json, const std::string& out_dir) {
    const mlsn::Variant variant = mlsn::parse_variant(variant_name);
    fs::create_directories(out_dir);
    mlsn::Rng rng(seed);

    std::optional<mlsn::DyadicCovariates> cov;
    if (!covariates_json.empty()) {
        require_exists(covariates_json);
        cov = mlsn::io::read_covariates(covariates_json);
    }

    mlsn::ModelState truth;
    if (!truth_json.empty()) {
        require_exists(truth_json);
        std::ifstream f(truth_json);
        truth = mlsn::io::state_from_json(ordered_json::parse(f));
    } else {
        mlsn::Hyper hy = mlsn::default_hyperparameters(variant);
        if (d > 0) hy.d = d;
        if (blocks_c > 0) hy.C = blocks_c;
        truth = mlsn::prior_draw(variant, hy, n, K, p, rng);
    }
    if (truth.p > 0 && !cov)
        throw ValidationError("simulate with p > 0 requires --covariates");

    const mlsn::MultilayerNetwork net =
        mlsn::simulate_network(truth, cov ? &*cov : nullptr, rng);
    mlsn::io::write_network(fs::path(out_dir) / "network", net);
    {
        std::ofstream f(fs::path(out_dir) / "truth.json", std::ios::binary);
        f << mlsn::io::state_to_json(truth).dump(2) << "\n";
    }
    ordered_json opts;
    opts["variant"] = variant_name;
    opts["n"] = truth.n;
    opts["K"] = truth.K;
    opts["p"] = truth.p;
    opts["seed"] = seed;
    write_run_manifest(out_dir, "simulate", opts);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multilayer similarity network models"};
    app.require_subcommand(1);

    std::string config_path;

    // extract
    auto* extract = app.add_subcommand("extract", "audio features from WAV files");
    std::string wav_dir, ex_out;
    extract->add_option("--wav-dir", wav_dir, "directory of WAV files")->required();
    extract->add_option("--out", ex_out, "output directory")->required();
    extract->add_option("--config", config_path, "JSON config file");

    // build
    auto* build = app.add_subcommand("build", "curves, distances, kNN network, covariates");
    std::string features_dir, songs_csv, distance = "canberra", bd_out;
    int knn = 3, grid_m = 1000;
    build->add_option("--features-dir", features_dir, "feature CSV directory")->required();
    build->add_option("--songs", songs_csv, "song attribute table CSV");
    build->add_option("--k", knn, "kNN neighbor count");
    build->add_option("--m", grid_m, "curve grid size");
    build->add_option("--distance", distance, "canberra|correlation|cosine|euclidean");
    build->add_option("--out", bd_out, "output directory")->required();
    build->add_option("--config", config_path, "JSON config file");

    // fit
    auto* fit = app.add_subcommand("fit", "MCMC fit of one model variant");
    std::string network_json, covariates_json, variant = "SMN", preset, ft_out;
    long burn = -1, keep = -1;
    int thin = -1, chains = 1, blocks_c = 0;
    std::uint64_t seed = 1;
    bool approx_alpha = false;
    fit->add_option("--network", network_json, "network header JSON")->required();
    fit->add_option("--covariates", covariates_json, "covariates manifest JSON");
    fit->add_option("--variant", variant, "SMN|SMN-C|SMN-C-BG|SMN-C-LD|SMN-C-SB")->required();
    fit->add_option("--preset", preset, "desk (default) or paper");
    fit->add_option("--burn", burn, "burn-in sweeps");
    fit->add_option("--keep", keep, "post-burn-in sweeps");
    fit->add_option("--thin", thin, "thinning interval");
    fit->add_option("--seed", seed, "RNG seed");
    fit->add_option("--chains", chains, "number of parallel chains");
    fit->add_option("--C", blocks_c, "block count override (SB)");
    fit->add_flag("--approx-alpha", approx_alpha,
                  "auxiliary-variable Gamma-mixture concentration update");
    fit->add_option("--out", ft_out, "output directory")->required();
    fit->add_option("--config", config_path, "JSON config file");

    // assess
    auto* assess = app.add_subcommand("assess", "PPC and scoring of a fitted archive");
    std::string as_archive, as_network, as_cov, as_out;
    std::uint64_t as_seed = 1;
    assess->add_option("--archive", as_archive, "archive directory")->required();
    assess->add_option("--network", as_network, "network header JSON")->required();
    assess->add_option("--covariates", as_cov, "covariates manifest JSON");
    assess->add_option("--seed", as_seed, "PPC simulation seed");
    assess->add_option("--out", as_out, "output directory")->required();
    assess->add_option("--config", config_path, "JSON config file");

    // communities
    auto* comm = app.add_subcommand("communities", "posterior partitions and ARI");
    std::string cm_archive, cm_albums, cm_network, cm_out;
    comm->add_option("--archive", cm_archive, "SB archive directory")->required();
    comm->add_option("--albums", cm_albums, "album partition CSV");
    comm->add_option("--network", cm_network, "network header JSON (node labels)");
    comm->add_option("--out", cm_out, "output directory")->required();
    comm->add_option("--config", config_path, "JSON config file");

    // simulate
    auto* sim = app.add_subcommand("simulate", "prior or fixed-truth synthetic data");
    std::string sm_variant = "SMN", sm_truth, sm_cov, sm_out;
    int sm_n = 20, sm_k = 2, sm_p = 0, sm_d = 0, sm_c = 0;
    std::uint64_t sm_seed = 1;
    sim->add_option("--variant", sm_variant, "model variant");
    sim->add_option("--n", sm_n, "node count");
    sim->add_option("--K", sm_k, "layer count");
    sim->add_option("--p", sm_p, "covariate count");
    sim->add_option("--d", sm_d, "latent dimension");
    sim->add_option("--C", sm_c, "block count");
    sim->add_option("--seed", sm_seed, "RNG seed");
    sim->add_option("--truth", sm_truth, "fixed-truth state JSON");
    sim->add_option("--covariates", sm_cov, "covariates manifest JSON");
    sim->add_option("--out", sm_out, "output directory")->required();
    sim->add_option("--config", config_path, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, config_path);
        if (sub == extract) return cmd_extract(wav_dir, ex_out);
        if (sub == build)
            return cmd_build(features_dir, songs_csv, knn, grid_m, distance, bd_out);
        if (sub == fit)
            return cmd_fit(network_json, covariates_json, variant, preset, burn, keep, thin,
                           seed, chains, blocks_c, approx_alpha, ft_out);
        if (sub == assess) return cmd_assess(as_archive, as_network, as_cov, as_seed, as_out);
        if (sub == comm) return cmd_communities(cm_archive, cm_albums, cm_network, cm_out);
        if (sub == sim)
            return cmd_simulate(sm_variant, sm_n, sm_k, sm_p, sm_d, sm_c, sm_seed, sm_truth,
                                sm_cov, sm_out);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
