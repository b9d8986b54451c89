#include "mlsn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mlsn::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    if (s.empty() || s == "nan" || s == "NaN")
        return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    return f;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream f = open_in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

Metric parse_metric(const std::string& name) {
    for (int m = 0; m < 4; ++m)
        if (name == metric_name(static_cast<Metric>(m))) return static_cast<Metric>(m);
    throw std::runtime_error("unknown metric id: " + name);
}

// One numeric table with a header row.
class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : f_(open_out(path)) {}
    void header(const std::vector<std::string>& names) {
        for (std::size_t q = 0; q < names.size(); ++q)
            f_ << (q ? "," : "") << names[q];
        f_ << "\n";
    }
    void row(const std::vector<double>& values) {
        for (std::size_t q = 0; q < values.size(); ++q)
            f_ << (q ? "," : "") << format_double(values[q]);
        f_ << "\n";
    }

private:
    std::ofstream f_;
};

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_network(const fs::path& dir, const MultilayerNetwork& net) {
    fs::create_directories(dir);
    ordered_json j;
    j["n"] = net.n;
    j["K"] = net.K;
    j["node_labels"] = net.node_labels;
    j["layer_labels"] = net.layer_labels;
    std::vector<std::string> files;
    for (int k = 0; k < net.K; ++k)
        files.push_back("layer_" + std::to_string(k + 1) + "_edges.csv");
    j["layers"] = files;
    open_out(dir / "network.json") << j.dump(2) << "\n";
    for (int k = 0; k < net.K; ++k) {
        std::ofstream f = open_out(dir / files[k]);
        f << "i,j\n";
        for (int i = 0; i < net.n; ++i)
            for (int jj = i + 1; jj < net.n; ++jj)
                if (net.layers[k].at(i, jj)) f << i + 1 << "," << jj + 1 << "\n";
    }
}

MultilayerNetwork read_network(const fs::path& header_json) {
    const ordered_json j = ordered_json::parse(open_in(header_json));
    MultilayerNetwork net;
    net.n = j.at("n").get<int>();
    net.K = j.at("K").get<int>();
    net.node_labels = j.at("node_labels").get<std::vector<std::string>>();
    net.layer_labels = j.at("layer_labels").get<std::vector<std::string>>();
    const fs::path dir = header_json.parent_path();
    for (const auto& file : j.at("layers")) {
        Layer g(net.n);
        const std::vector<std::string> lines = read_lines(dir / file.get<std::string>());
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto parts = split_csv(lines[r]);
            if (parts.size() != 2) throw std::runtime_error("bad edge row: " + lines[r]);
            g.set(std::stoi(parts[0]) - 1, std::stoi(parts[1]) - 1, true);
        }
        net.layers.push_back(std::move(g));
    }
    net.validate();
    return net;
}

Layer read_dense_layer_csv(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty adjacency file: " + path.string());
    std::size_t start = 0;
    {
        // Skip a non-numeric header line if present.
        const auto parts = split_csv(lines[0]);
        try {
            (void)std::stod(parts[0]);
        } catch (...) {
            start = 1;
        }
    }
    const int n = static_cast<int>(lines.size() - start);
    Layer g(n);
    for (int i = 0; i < n; ++i) {
        const auto parts = split_csv(lines[start + i]);
        if (static_cast<int>(parts.size()) != n)
            throw std::runtime_error("adjacency row length mismatch in " + path.string());
        for (int j = 0; j < n; ++j)
            if (i != j && parse_double(parts[j]) != 0.0) g.set(i, j, true);
    }
    return g;
}

void write_features(const fs::path& path, const std::vector<FrameSeries>& series) {
    if (series.size() != 4) throw std::invalid_argument("write_features: need 4 series");
    std::ofstream f = open_out(path);
    f << "frame_index,t_m,rms,sc,sfm,flux\n";
    const std::size_t m = series[0].values.size();
    for (std::size_t r = 0; r < m; ++r) {
        f << r << "," << format_double(series[0].frame_times[r]);
        for (int q = 0; q < 4; ++q) {
            const bool def = series[q].defined.empty() || series[q].defined[r];
            f << "," << (def ? format_double(series[q].values[r]) : "nan");
        }
        f << "\n";
    }
}

std::vector<FrameSeries> read_features(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<FrameSeries> series(4);
    for (int q = 0; q < 4; ++q) series[q].metric = static_cast<Metric>(q);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto parts = split_csv(lines[r]);
        if (parts.size() != 6) throw std::runtime_error("bad feature row: " + lines[r]);
        const double t = parse_double(parts[1]);
        for (int q = 0; q < 4; ++q) {
            const double v = parse_double(parts[2 + q]);
            series[q].frame_times.push_back(t);
            series[q].values.push_back(std::isnan(v) ? 0.0 : v);
            series[q].defined.push_back(!std::isnan(v));
        }
    }
    return series;
}

void write_curves(const fs::path& path, const std::vector<FeatureCurve>& curves) {
    std::ofstream f = open_out(path);
    f << "song_id,metric_id,l,value\n";
    for (const FeatureCurve& c : curves)
        for (std::size_t l = 0; l < c.values.size(); ++l)
            f << c.song_id << "," << metric_name(c.metric) << "," << l << ","
              << format_double(c.values[l]) << "\n";
}

std::vector<FeatureCurve> read_curves(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<FeatureCurve> curves;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto parts = split_csv(lines[r]);
        if (parts.size() != 4) throw std::runtime_error("bad curve row: " + lines[r]);
        const Metric m = parse_metric(parts[1]);
        if (curves.empty() || curves.back().song_id != parts[0] || curves.back().metric != m) {
            FeatureCurve c;
            c.song_id = parts[0];
            c.metric = m;
            curves.push_back(std::move(c));
        }
        curves.back().values.push_back(parse_double(parts[3]));
    }
    return curves;
}

void write_distance_matrix(const fs::path& path, const DistanceMatrix& dm) {
    std::ofstream f = open_out(path);
    f << distance_name(dm.kind) << "\n";
    for (int i = 0; i < dm.n; ++i) {
        for (int j = 0; j < dm.n; ++j) f << (j ? "," : "") << format_double(dm.at(i, j));
        f << "\n";
    }
}

DistanceMatrix read_distance_matrix(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty distance file: " + path.string());
    DistanceMatrix dm;
    dm.kind = parse_distance(lines[0]);
    dm.n = static_cast<int>(lines.size() - 1);
    dm.d.assign(static_cast<std::size_t>(dm.n) * dm.n, 0.0);
    for (int i = 0; i < dm.n; ++i) {
        const auto parts = split_csv(lines[i + 1]);
        if (static_cast<int>(parts.size()) != dm.n)
            throw std::runtime_error("distance row length mismatch in " + path.string());
        for (int j = 0; j < dm.n; ++j)
            dm.d[static_cast<std::size_t>(i) * dm.n + j] = parse_double(parts[j]);
    }
    return dm;
}

std::vector<SongRecord> read_song_table(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty song table: " + path.string());
    const auto header = split_csv(lines[0]);
    auto col = [&](const std::string& name) -> int {
        for (std::size_t q = 0; q < header.size(); ++q)
            if (header[q] == name) return static_cast<int>(q);
        return -1;
    };
    const int c_id = col("song_id"), c_band = col("band"), c_album = col("album");
    const int c_year = col("year"), c_dur = col("duration_s"), c_bpm = col("bpm");
    std::vector<int> c_emo(8), c_vad(3);
    bool emo_ok = true, vad_ok = true;
    for (int q = 0; q < 8; ++q) {
        c_emo[q] = col("emo_" + std::to_string(q + 1));
        emo_ok = emo_ok && c_emo[q] >= 0;
    }
    const char* vad_names[3] = {"vad_v", "vad_a", "vad_d"};
    for (int q = 0; q < 3; ++q) {
        c_vad[q] = col(vad_names[q]);
        vad_ok = vad_ok && c_vad[q] >= 0;
    }
    if (c_id < 0) throw std::runtime_error("song table missing song_id column");

    std::vector<SongRecord> songs;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto parts = split_csv(lines[r]);
        auto field = [&](int c) { return (c >= 0 && c < static_cast<int>(parts.size()))
                                             ? parts[c]
                                             : std::string(); };
        SongRecord s;
        s.song_id = field(c_id);
        s.band = field(c_band);
        s.album = field(c_album);
        if (!field(c_year).empty()) s.year = parse_double(field(c_year));
        if (!field(c_dur).empty()) s.duration_s = parse_double(field(c_dur));
        if (!field(c_bpm).empty()) s.bpm = parse_double(field(c_bpm));
        if (emo_ok) {
            std::vector<double> emo(8);
            bool all = true;
            for (int q = 0; q < 8; ++q) {
                if (field(c_emo[q]).empty()) all = false;
                else emo[q] = parse_double(field(c_emo[q]));
            }
            if (all) s.emotion = emo;
        }
        if (vad_ok) {
            std::vector<double> vad(3);
            bool all = true;
            for (int q = 0; q < 3; ++q) {
                if (field(c_vad[q]).empty()) all = false;
                else vad[q] = parse_double(field(c_vad[q]));
            }
            if (all) s.vad = vad;
        }
        songs.push_back(std::move(s));
    }
    return songs;
}

void write_covariates(const fs::path& dir, const DyadicCovariates& cov) {
    fs::create_directories(dir);
    ordered_json j;
    j["n"] = cov.n;
    j["p"] = cov.p;
    j["names"] = cov.names;
    j["standardized"] = std::vector<bool>(cov.standardized.begin(), cov.standardized.end());
    std::vector<std::string> files;
    for (int l = 0; l < cov.p; ++l) files.push_back(cov.names[l] + ".csv");
    j["files"] = files;
    open_out(dir / "covariates.json") << j.dump(2) << "\n";
    for (int l = 0; l < cov.p; ++l) {
        std::ofstream f = open_out(dir / files[l]);
        for (int i = 0; i < cov.n; ++i) {
            for (int jj = 0; jj < cov.n; ++jj)
                f << (jj ? "," : "") << format_double(i == jj ? 0.0 : cov.at(i, jj, l));
            f << "\n";
        }
    }
}

DyadicCovariates read_covariates(const fs::path& manifest_json) {
    const ordered_json j = ordered_json::parse(open_in(manifest_json));
    DyadicCovariates cov;
    cov.n = j.at("n").get<int>();
    cov.p = j.at("p").get<int>();
    cov.names = j.at("names").get<std::vector<std::string>>();
    for (bool b : j.at("standardized").get<std::vector<bool>>()) cov.standardized.push_back(b);
    cov.x.assign(cov.dyads() * cov.p, 0.0);
    const fs::path dir = manifest_json.parent_path();
    const auto files = j.at("files").get<std::vector<std::string>>();
    for (int l = 0; l < cov.p; ++l) {
        const std::vector<std::string> lines = read_lines(dir / files[l]);
        if (static_cast<int>(lines.size()) != cov.n)
            throw std::runtime_error("covariate matrix size mismatch: " + files[l]);
        for (int i = 0; i < cov.n; ++i) {
            const auto parts = split_csv(lines[i]);
            for (int jj = i + 1; jj < cov.n; ++jj)
                cov.x[DyadicCovariates::dyad_index(i, jj, cov.n) * cov.p + l] =
                    parse_double(parts[jj]);
        }
    }
    return cov;
}

ordered_json state_to_json(const ModelState& s) {
    ordered_json j;
    j["variant"] = variant_name(s.variant);
    j["n"] = s.n;
    j["K"] = s.K;
    j["p"] = s.p;
    j["d"] = s.d;
    j["C"] = s.C;
    j["mu_enabled"] = s.mu_enabled;
    j["zeta"] = s.zeta;
    j["mu"] = s.mu;
    j["delta"] = s.delta;
    j["vartheta"] = s.vartheta;
    j["omega2"] = s.omega2;
    j["sigma2"] = s.sigma2;
    j["tau2"] = s.tau2;
    j["kappa2"] = s.kappa2;
    j["beta"] = s.beta;
    j["varsigma2"] = s.varsigma2;
    j["u"] = s.latent;
    j["lambda"] = s.lambda;
    j["upsilon2"] = s.upsilon2;
    j["xi"] = s.labels;
    j["gamma"] = s.block;
    j["weights"] = s.weights;
    j["alpha"] = s.alpha;
    j["rho2"] = s.rho2;
    return j;
}

ModelState state_from_json(const ordered_json& j) {
    ModelState s;
    s.variant = parse_variant(j.at("variant").get<std::string>());
    s.n = j.at("n").get<int>();
    s.K = j.at("K").get<int>();
    s.p = j.at("p").get<int>();
    s.d = j.at("d").get<int>();
    s.C = j.at("C").get<int>();
    s.mu_enabled = j.at("mu_enabled").get<bool>();
    s.zeta = j.at("zeta").get<double>();
    s.mu = j.at("mu").get<std::vector<double>>();
    s.delta = j.at("delta").get<std::vector<double>>();
    s.vartheta = j.at("vartheta").get<std::vector<double>>();
    s.omega2 = j.at("omega2").get<double>();
    s.sigma2 = j.at("sigma2").get<double>();
    s.tau2 = j.at("tau2").get<double>();
    s.kappa2 = j.at("kappa2").get<double>();
    s.beta = j.at("beta").get<std::vector<double>>();
    s.varsigma2 = j.at("varsigma2").get<double>();
    s.latent = j.at("u").get<std::vector<double>>();
    s.lambda = j.at("lambda").get<std::vector<double>>();
    s.upsilon2 = j.at("upsilon2").get<double>();
    s.labels = j.at("xi").get<std::vector<int>>();
    s.block = j.at("gamma").get<std::vector<double>>();
    s.weights = j.at("weights").get<std::vector<double>>();
    s.alpha = j.at("alpha").get<double>();
    s.rho2 = j.at("rho2").get<double>();
    return s;
}

namespace {

struct BlockSpec {
    std::string file;
    std::vector<std::string> names;
    std::function<std::vector<double>(const ModelState&)> get;
    std::function<void(ModelState&, const std::vector<double>&)> set;
};

std::vector<BlockSpec> block_specs(const ModelState& proto) {
    const int n = proto.n, K = proto.K, p = proto.p, d = proto.d, C = proto.C;
    std::vector<BlockSpec> specs;
    auto name2 = [](const std::string& base, int a, int b) {
        return base + "[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]";
    };

    specs.push_back({"zeta.csv", {"zeta"},
                     [](const ModelState& s) { return std::vector<double>{s.zeta}; },
                     [](ModelState& s, const std::vector<double>& v) { s.zeta = v[0]; }});
    if (proto.mu_enabled) {
        std::vector<std::string> names;
        for (int k = 0; k < K; ++k) names.push_back("mu[" + std::to_string(k + 1) + "]");
        specs.push_back({"mu.csv", names, [](const ModelState& s) { return s.mu; },
                         [](ModelState& s, const std::vector<double>& v) { s.mu = v; }});
    }
    {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < K; ++k) names.push_back(name2("delta", i, k));
        specs.push_back({"delta.csv", names, [](const ModelState& s) { return s.delta; },
                         [](ModelState& s, const std::vector<double>& v) { s.delta = v; }});
    }
    {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("vartheta[" + std::to_string(i + 1) + "]");
        specs.push_back({"vartheta.csv", names,
                         [](const ModelState& s) { return s.vartheta; },
                         [](ModelState& s, const std::vector<double>& v) { s.vartheta = v; }});
    }
    {
        std::vector<std::string> names = {"omega2"};
        if (proto.mu_enabled) names.push_back("sigma2");
        names.push_back("tau2");
        names.push_back("kappa2");
        if (p > 0) names.push_back("varsigma2");
        if (has_latents(proto.variant)) names.push_back("upsilon2");
        if (has_blocks(proto.variant)) names.push_back("rho2");
        specs.push_back(
            {"variances.csv", names,
             [](const ModelState& s) {
                 std::vector<double> v = {s.omega2};
                 if (s.mu_enabled) v.push_back(s.sigma2);
                 v.push_back(s.tau2);
                 v.push_back(s.kappa2);
                 if (s.p > 0) v.push_back(s.varsigma2);
                 if (has_latents(s.variant)) v.push_back(s.upsilon2);
                 if (has_blocks(s.variant)) v.push_back(s.rho2);
                 return v;
             },
             [](ModelState& s, const std::vector<double>& v) {
                 std::size_t q = 0;
                 s.omega2 = v[q++];
                 if (s.mu_enabled) s.sigma2 = v[q++];
                 s.tau2 = v[q++];
                 s.kappa2 = v[q++];
                 if (s.p > 0) s.varsigma2 = v[q++];
                 if (has_latents(s.variant)) s.upsilon2 = v[q++];
                 if (has_blocks(s.variant)) s.rho2 = v[q++];
             }});
    }
    if (p > 0) {
        std::vector<std::string> names;
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < p; ++l) names.push_back(name2("beta", k, l));
        specs.push_back({"beta.csv", names, [](const ModelState& s) { return s.beta; },
                         [](ModelState& s, const std::vector<double>& v) { s.beta = v; }});
    }
    if (has_latents(proto.variant)) {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < d; ++r) names.push_back(name2("u", i, r));
        specs.push_back({"u.csv", names, [](const ModelState& s) { return s.latent; },
                         [](ModelState& s, const std::vector<double>& v) { s.latent = v; }});
        std::vector<std::string> lnames;
        for (int k = 0; k < K; ++k) lnames.push_back("lambda[" + std::to_string(k + 1) + "]");
        specs.push_back({"lambda.csv", lnames, [](const ModelState& s) { return s.lambda; },
                         [](ModelState& s, const std::vector<double>& v) { s.lambda = v; }});
    }
    if (has_blocks(proto.variant)) {
        std::vector<std::string> gnames;
        for (int k = 0; k < K; ++k)
            for (int a = 0; a < C; ++a)
                for (int b = a; b < C; ++b)
                    gnames.push_back("gamma[" + std::to_string(a + 1) + "," +
                                     std::to_string(b + 1) + "," + std::to_string(k + 1) + "]");
        specs.push_back({"gamma.csv", gnames, [](const ModelState& s) { return s.block; },
                         [](ModelState& s, const std::vector<double>& v) { s.block = v; }});
        std::vector<std::string> wnames;
        for (int k = 0; k < K; ++k)
            for (int c = 0; c < C; ++c) wnames.push_back(name2("weight", k, c));
        specs.push_back({"weights.csv", wnames,
                         [](const ModelState& s) { return s.weights; },
                         [](ModelState& s, const std::vector<double>& v) { s.weights = v; }});
        std::vector<std::string> xnames;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < K; ++k) xnames.push_back(name2("xi", i, k));
        specs.push_back({"xi.csv", xnames,
                         [](const ModelState& s) {
                             std::vector<double> v(s.labels.begin(), s.labels.end());
                             for (double& x : v) x += 1.0;  // 1-based on disk
                             return v;
                         },
                         [](ModelState& s, const std::vector<double>& v) {
                             s.labels.resize(v.size());
                             for (std::size_t q = 0; q < v.size(); ++q)
                                 s.labels[q] = static_cast<int>(v[q]) - 1;
                         }});
        specs.push_back({"alpha.csv", {"alpha"},
                         [](const ModelState& s) { return std::vector<double>{s.alpha}; },
                         [](ModelState& s, const std::vector<double>& v) { s.alpha = v[0]; }});
    }
    return specs;
}

ordered_json hyper_to_json(const Hyper& hy) {
    ordered_json j;
    j["a_omega"] = hy.a_omega; j["b_omega"] = hy.b_omega;
    j["a_sigma"] = hy.a_sigma; j["b_sigma"] = hy.b_sigma;
    j["a_tau"] = hy.a_tau; j["b_tau"] = hy.b_tau;
    j["a_kappa"] = hy.a_kappa; j["b_kappa"] = hy.b_kappa;
    j["a_varsigma"] = hy.a_varsigma; j["b_varsigma"] = hy.b_varsigma;
    j["a_upsilon"] = hy.a_upsilon; j["b_upsilon"] = hy.b_upsilon;
    j["a_rho"] = hy.a_rho; j["b_rho"] = hy.b_rho;
    j["a_alpha"] = hy.a_alpha; j["b_alpha"] = hy.b_alpha;
    j["d"] = hy.d;
    j["C"] = hy.C;
    j["exact_alpha"] = hy.exact_alpha;
    return j;
}

Hyper hyper_from_json(const ordered_json& j) {
    Hyper hy;
    hy.a_omega = j.at("a_omega").get<double>(); hy.b_omega = j.at("b_omega").get<double>();
    hy.a_sigma = j.at("a_sigma").get<double>(); hy.b_sigma = j.at("b_sigma").get<double>();
    hy.a_tau = j.at("a_tau").get<double>(); hy.b_tau = j.at("b_tau").get<double>();
    hy.a_kappa = j.at("a_kappa").get<double>(); hy.b_kappa = j.at("b_kappa").get<double>();
    hy.a_varsigma = j.at("a_varsigma").get<double>();
    hy.b_varsigma = j.at("b_varsigma").get<double>();
    hy.a_upsilon = j.at("a_upsilon").get<double>();
    hy.b_upsilon = j.at("b_upsilon").get<double>();
    hy.a_rho = j.at("a_rho").get<double>(); hy.b_rho = j.at("b_rho").get<double>();
    hy.a_alpha = j.at("a_alpha").get<double>(); hy.b_alpha = j.at("b_alpha").get<double>();
    hy.d = j.at("d").get<int>();
    hy.C = j.at("C").get<int>();
    hy.exact_alpha = j.at("exact_alpha").get<bool>();
    return hy;
}

}  // namespace

void write_archive(const fs::path& dir, const ChainArchive& archive) {
    if (archive.draws.empty()) throw std::invalid_argument("write_archive: empty archive");
    fs::create_directories(dir);
    const ModelState& proto = archive.draws.front();

    ordered_json j;
    j["variant"] = variant_name(archive.config.variant);
    j["n"] = archive.n;
    j["K"] = archive.K;
    j["p"] = archive.p;
    j["d"] = proto.d;
    j["C"] = proto.C;
    j["burn"] = archive.config.burn;
    j["keep"] = archive.config.keep;
    j["thin"] = archive.config.thin;
    j["seed"] = archive.config.seed;
    j["stream"] = archive.config.stream;
    j["louvain_init"] = archive.config.louvain_init;
    j["reduced_mu"] = archive.config.reduced_mu;
    j["hyper"] = hyper_to_json(archive.config.hyper);
    j["draws"] = archive.draws.size();
    j["node_accept_rate"] = archive.node_accept_rate;
    j["layer_accept_rate"] = archive.layer_accept_rate;
    j["wall_seconds"] = archive.wall_seconds;
    open_out(dir / "manifest.json") << j.dump(2) << "\n";

    for (const BlockSpec& spec : block_specs(proto)) {
        CsvWriter w(dir / spec.file);
        w.header(spec.names);
        for (const ModelState& s : archive.draws) w.row(spec.get(s));
    }
    {
        CsvWriter w(dir / "loglik.csv");
        w.header({"loglik"});
        for (double v : archive.loglik) w.row({v});
    }
    {
        std::ofstream f = open_out(dir / "mcse.csv");
        f << "parameter,mean,mcse\n";
        for (std::size_t q = 0; q < archive.scalar_names.size(); ++q)
            f << archive.scalar_names[q] << "," << format_double(archive.scalar_mean[q]) << ","
              << format_double(archive.scalar_mcse[q]) << "\n";
    }
}

ChainArchive read_archive(const fs::path& dir) {
    const ordered_json j = ordered_json::parse(open_in(dir / "manifest.json"));
    ChainArchive arc;
    arc.config.variant = parse_variant(j.at("variant").get<std::string>());
    arc.n = j.at("n").get<int>();
    arc.K = j.at("K").get<int>();
    arc.p = j.at("p").get<int>();
    arc.config.burn = j.at("burn").get<long>();
    arc.config.keep = j.at("keep").get<long>();
    arc.config.thin = j.at("thin").get<int>();
    arc.config.seed = j.at("seed").get<std::uint64_t>();
    arc.config.stream = j.at("stream").get<std::uint64_t>();
    arc.config.louvain_init = j.at("louvain_init").get<bool>();
    arc.config.reduced_mu = j.at("reduced_mu").get<bool>();
    arc.config.hyper = hyper_from_json(j.at("hyper"));
    arc.node_accept_rate = j.at("node_accept_rate").get<std::vector<double>>();
    arc.layer_accept_rate = j.at("layer_accept_rate").get<std::vector<double>>();
    arc.wall_seconds = j.at("wall_seconds").get<double>();

    Hyper hy = arc.config.hyper;
    ModelState proto = make_state(arc.config.variant, arc.n, arc.K, arc.p, hy);
    proto.mu_enabled = !arc.config.reduced_mu;
    const std::size_t S = j.at("draws").get<std::size_t>();
    arc.draws.assign(S, proto);

    for (const BlockSpec& spec : block_specs(proto)) {
        const std::vector<std::string> lines = read_lines(dir / spec.file);
        if (lines.size() != S + 1)
            throw std::runtime_error("draw count mismatch in " + spec.file);
        for (std::size_t s = 0; s < S; ++s) {
            const auto parts = split_csv(lines[s + 1]);
            std::vector<double> v(parts.size());
            for (std::size_t q = 0; q < parts.size(); ++q) v[q] = parse_double(parts[q]);
            spec.set(arc.draws[s], v);
        }
    }
    {
        const std::vector<std::string> lines = read_lines(dir / "loglik.csv");
        for (std::size_t r = 1; r < lines.size(); ++r)
            arc.loglik.push_back(parse_double(lines[r]));
    }
    {
        const std::vector<std::string> lines = read_lines(dir / "mcse.csv");
        for (std::size_t r = 1; r < lines.size(); ++r) {
            // parameter names may contain commas (e.g. delta[1,2]); the last
            // two fields are always the numbers.
            const std::string& line = lines[r];
            const std::size_t c2 = line.rfind(',');
            const std::size_t c1 = line.rfind(',', c2 - 1);
            arc.scalar_names.push_back(line.substr(0, c1));
            arc.scalar_mean.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1)));
            arc.scalar_mcse.push_back(parse_double(line.substr(c2 + 1)));
        }
    }
    return arc;
}

}  // namespace mlsn::io
