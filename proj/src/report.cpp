#include "gaborwf/report.hpp"
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace gwf {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

ojson real_vector_to_json(const RVec& v) {
    ojson a = ojson::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

} // namespace

ojson complex_matrix_to_json(const Mat& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat complex_matrix_from_json(const ojson& j) {
    const int rows = static_cast<int>(j.size());
    if (rows == 0) throw invariant_violation("Q: empty matrix");
    const int cols = static_cast<int>(j.at(0).size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j.at(i).size()) != cols)
            throw invariant_violation("Q: ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            const auto& e = j.at(i).at(c);
            if (e.is_number()) {
                m(i, c) = cplx(e.get<double>(), 0.0);
            } else {
                if (!e.is_array() || e.size() != 2)
                    throw invariant_violation("Q: entries must be numbers or [re, im]");
                m(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
    }
    return m;
}

ojson conic_to_json(const ConicSet& c) {
    ojson j;
    j["ambient_dim"] = c.ambient_dim;
    j["empty"] = c.patches.empty();
    ojson caps = ojson::array();
    for (const CapPatch& p : c.patches) {
        ojson cap;
        cap["direction"] = real_vector_to_json(p.direction);
        cap["half_angle_rad"] = p.half_angle;
        caps.push_back(std::move(cap));
    }
    j["caps"] = std::move(caps);
    return j;
}

ojson subspace_to_json(const Subspace& s) {
    ojson j;
    j["ambient_dim"] = s.ambient_dim;
    j["dimension"] = s.dim();
    ojson basis = ojson::array();
    for (int c = 0; c < s.basis.cols(); ++c) basis.push_back(real_vector_to_json(s.basis.col(c)));
    j["basis"] = std::move(basis);
    return j;
}

namespace {

ConicSet conic_from_json(const ojson& j, int ambient_dim) {
    if (j.is_string() && j.get<std::string>() == "everything")
        return ConicSet::everything(ambient_dim);
    ConicSet c;
    c.ambient_dim = ambient_dim;
    for (const auto& cap : j.at("caps")) {
        const auto& dir = cap.at("direction");
        RVec v(dir.size());
        for (size_t i = 0; i < dir.size(); ++i) v(static_cast<int>(i)) = dir.at(i).get<double>();
        double half = 0.0;
        if (cap.contains("half_angle_rad")) half = cap.at("half_angle_rad").get<double>();
        else if (cap.contains("half_angle_deg"))
            half = cap.at("half_angle_deg").get<double>() * std::numbers::pi / 180.0;
        v.normalize();
        c.patches.push_back({v, half});
    }
    c.validate();
    return c;
}

} // namespace

ScenarioConfig parse_scenario(const ojson& j) {
    ScenarioConfig sc;
    sc.name = j.at("name").get<std::string>();
    sc.d = j.value("d", 1);
    sc.Q = complex_matrix_from_json(j.at("Q"));
    if (sc.Q.rows() != 2 * sc.d || sc.Q.cols() != 2 * sc.d)
        throw invariant_violation("Q: expected a 2d x 2d matrix");

    for (const auto& t : j.at("times")) sc.times.push_back(t.get<double>());
    if (sc.times.empty()) throw invariant_violation("times: at least one time required");
    for (size_t i = 0; i < sc.times.size(); ++i) {
        if (sc.times[i] <= 0.0)
            throw invariant_violation("times: must be strictly positive");
        if (i > 0 && sc.times[i] <= sc.times[i - 1])
            throw invariant_violation("times: must be strictly ascending");
    }

    if (j.contains("initial_datum")) {
        const auto& du = j.at("initial_datum");
        if (du.contains("builtin")) sc.datum = du.at("builtin").get<std::string>();
        else if (du.contains("expression")) sc.datum = du.at("expression").get<std::string>();
        else if (du.contains("samples")) {
            sc.samples_path = du.at("samples").get<std::string>();
            sc.datum = "samples";
        } else
            throw invariant_violation("initial_datum: expected builtin, expression, or samples");
    }

    if (j.contains("grid")) {
        sc.X = j.at("grid").value("X", sc.X);
        sc.n = j.at("grid").value("n", sc.n);
    }
    if (j.contains("hermite")) {
        sc.N_h = j.at("hermite").value("N_h", sc.N_h);
        sc.hermite_scale = j.at("hermite").value("scale", sc.hermite_scale);
    }
    if (j.contains("detector")) {
        const auto& dj = j.at("detector");
        DetectorConfig& dc = sc.detector;
        dc.n_dirs = dj.value("n_dirs", dc.n_dirs);
        dc.n_shells = dj.value("n_shells", dc.n_shells);
        dc.shell_ratio = dj.value("shell_ratio", dc.shell_ratio);
        dc.rmax_frac = dj.value("rmax_frac", dc.rmax_frac);
        dc.half_angle_deg = dj.value("half_angle_deg", dc.half_angle_deg);
        dc.n_det = dj.value("n_det", dc.n_det);
        dc.conf_min = dj.value("conf_min", dc.conf_min);
        dc.range_floor = dj.value("range_floor", dc.range_floor);
        dc.merge_gap = dj.value("merge_gap", dc.merge_gap);
        dc.window_scale = dj.value("window_scale", dc.window_scale);
    }
    if (j.contains("wf0")) sc.wf0 = conic_from_json(j.at("wf0"), 2 * sc.d);
    if (j.contains("expected")) sc.expected = j.at("expected");
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    ojson j = ojson::parse(in);
    return parse_scenario(j);
}

ojson scenario_to_json(const ScenarioConfig& sc) {
    ojson j;
    j["name"] = sc.name;
    j["d"] = sc.d;
    j["Q"] = complex_matrix_to_json(sc.Q);
    j["times"] = sc.times;
    if (!sc.datum.empty()) {
        if (sc.datum == "samples") j["initial_datum"] = {{"samples", sc.samples_path}};
        else j["initial_datum"] = {{"expression", sc.datum}};
    }
    j["grid"] = {{"X", sc.X}, {"n", sc.n}};
    j["hermite"] = {{"N_h", sc.N_h}, {"scale", sc.hermite_scale}};
    const DetectorConfig dflt;
    const DetectorConfig& dc = sc.detector;
    ojson dj;
    if (dc.n_dirs != dflt.n_dirs) dj["n_dirs"] = dc.n_dirs;
    if (dc.n_shells != dflt.n_shells) dj["n_shells"] = dc.n_shells;
    if (dc.shell_ratio != dflt.shell_ratio) dj["shell_ratio"] = dc.shell_ratio;
    if (dc.rmax_frac != dflt.rmax_frac) dj["rmax_frac"] = dc.rmax_frac;
    if (dc.half_angle_deg != dflt.half_angle_deg) dj["half_angle_deg"] = dc.half_angle_deg;
    if (dc.n_det != dflt.n_det) dj["n_det"] = dc.n_det;
    if (dc.conf_min != dflt.conf_min) dj["conf_min"] = dc.conf_min;
    if (dc.range_floor != dflt.range_floor) dj["range_floor"] = dc.range_floor;
    if (dc.merge_gap != dflt.merge_gap) dj["merge_gap"] = dc.merge_gap;
    if (dc.window_scale != dflt.window_scale) dj["window_scale"] = dc.window_scale;
    if (!dj.empty()) j["detector"] = std::move(dj);
    if (sc.wf0) j["wf0"] = conic_to_json(*sc.wf0);
    if (!sc.expected.is_null()) j["expected"] = sc.expected;
    return j;
}

namespace {

ojson estimate_to_json(const WFEstimate& est) {
    ojson j;
    j["n_det"] = est.n_det;
    j["shell_radii"] = est.shell_radii;
    j["n_flagged_bins"] = est.flagged.size();
    ojson caps = ojson::array();
    for (const CapEstimate& c : est.caps) {
        ojson cap;
        cap["center_deg"] = c.center_deg;
        cap["half_width_deg"] = c.half_width_deg;
        cap["worst_exponent"] = c.worst_exponent;
        caps.push_back(std::move(cap));
    }
    j["caps"] = std::move(caps);
    j["empty"] = est.flagged.empty();
    return j;
}

} // namespace

ScenarioArtifacts run_scenario(const ScenarioConfig& sc, const RunOptions& opt) {
    set_thread_budget(opt.threads);
    ScenarioArtifacts art;

    const QuadraticHamiltonian h = QuadraticHamiltonian::make(sc.d, sc.Q);
    const HamiltonMap fm = hamilton_map(h);
    const SingularSpaceResult ss = singular_space(fm);
    art.S = ss.S;

    ojson& rep = art.report;
    rep["format_version"] = 1;
    rep["scenario"] = sc.name;
    rep["d"] = sc.d;

    ojson jham;
    jham["Q"] = complex_matrix_to_json(sc.Q);
    jham["normality_defect"] = normality_defect(fm);
    const bool re_q_zero = sc.Q.real().norm() < 1e-12 * std::max(1.0, sc.Q.norm());
    jham["re_q_zero"] = re_q_zero;
    if (sc.d == 1) jham["fast_path"] = fast_path_pattern(h);
    rep["hamiltonian"] = std::move(jham);

    ojson jss = subspace_to_json(ss.S);
    jss["kernel_dims"] = ss.kernel_dims;
    rep["singular_space"] = std::move(jss);

    // fixed Monte Carlo vectors for the per-time positivity diagnostic
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> samples;
    for (int k = 0; k < 16; ++k) {
        Vec v(2 * sc.d);
        for (int i = 0; i < 2 * sc.d; ++i) v(i) = cplx(gauss(rng), gauss(rng));
        samples.push_back(std::move(v));
    }

    std::optional<SampledDistribution> u0;
    std::optional<GalerkinOperator> gal;
    if (sc.d == 1 && !sc.datum.empty()) {
        u0 = (sc.datum == "samples") ? datum_from_samples(sc.samples_path, sc.X)
                                     : make_datum(sc.datum, sc.X, sc.n);
        if (fast_path_pattern(h).empty()) {
            gal = hermite_matrix(h, sc.N_h, sc.hermite_scale);
            rep["hamiltonian"]["dissipativity_margin"] = gal->dissipativity_margin;
        }
    }

    const ConicSet wf0 = sc.wf0 ? *sc.wf0 : ConicSet::everything(2 * sc.d);
    rep["times"] = ojson::array();
    for (const double t : sc.times) {
        ojson jt;
        jt["t"] = t;

        const PropagationReport pr = propagate(h, wf0, t);
        ojson jp;
        jp["exact"] = pr.exact;
        jp["singular_dimension"] = pr.S_used.dim();
        jp["bound_singular"] = conic_to_json(pr.bound_singular);
        jp["bound_general"] = conic_to_json(pr.bound_general);
        jt["propagation"] = std::move(jp);

        const Mat E = expm(Mat(cplx(0.0, -2.0 * t) * fm.F));
        ojson jd;
        jd["symplectic_residual"] = symplectic_residual(E);
        jd["positivity_defect"] = graph_positivity_defect(fm.F, t, samples);
        jt["diagnostics"] = std::move(jd);

        if (u0) {
            SampledDistribution ut = *u0;
            ojson jdet;
            if (auto fp = fast_path(h, *u0, t)) {
                ut = std::move(*fp);
                jdet["method"] = "fast_path:" + fast_path_pattern(h);
            } else {
                const HermiteRep c0 = hermite_analysis(*u0, sc.N_h, sc.hermite_scale);
                const double captured = c0.coeffs.norm();
                const EvolveResult ev = evolve(*gal, c0, t);
                ut = hermite_synthesis(ev.u, sc.X, sc.n);
                jdet["method"] = "galerkin";
                jdet["eps_trunc"] = ev.eps_trunc;
                const double full = u0->norm_l2();
                jdet["hermite_capture"] = full > 0.0 ? captured / full : 1.0;
            }
            jdet["evolved_norm"] = ut.norm_l2();
            const Spectrogram sp = stft(ut, sc.detector.window_scale);
            const WFEstimate est = estimate_wf(sp, sc.detector);
            jdet["wf"] = estimate_to_json(est);
            jt["detector"] = std::move(jdet);
            art.spectrograms.push_back(sp);
            art.estimates.push_back(est);
        }

        rep["times"].push_back(std::move(jt));
    }
    if (!sc.expected.is_null()) rep["expected"] = sc.expected;
    return art;
}

namespace {

void write_directions_csv(const std::string& path, const WFEstimate& est) {
    std::ofstream out(path);
    out << "theta_deg,exponent,confidence,flagged";
    for (size_t i = 0; i < est.shell_radii.size(); ++i)
        out << ",max_r" << fmt(est.shell_radii[i]);
    out << "\n";
    const int nd = static_cast<int>(est.per_direction.size());
    for (int b = 0; b < nd; ++b) {
        const DirectionReading& r = est.per_direction[b];
        out << fmt((b + 0.5) * est.step_deg) << ',' << fmt(r.exponent) << ','
            << fmt(r.confidence) << ',' << (r.flagged ? 1 : 0);
        for (int i = 0; i < est.shell_table.cols(); ++i) out << ',' << fmt(est.shell_table(b, i));
        out << "\n";
    }
}

void write_caps_csv(const std::string& path, const WFEstimate& est) {
    std::ofstream out(path);
    out << "center_deg,half_width_deg,worst_exponent\n";
    for (const CapEstimate& c : est.caps)
        out << fmt(c.center_deg) << ',' << fmt(c.half_width_deg) << ','
            << fmt(c.worst_exponent) << "\n";
}

void write_spectrogram_csv(const std::string& path, const Spectrogram& sp) {
    std::ofstream out(path);
    const int stride = (sp.n + 511) / 512;
    out << "xi\\x";
    for (int j = 0; j < sp.n; j += stride) out << ',' << fmt(sp.x_of(j));
    out << "\n";
    for (int m = 0; m < sp.n; m += stride) {
        out << fmt(sp.xi_of(m));
        for (int j = 0; j < sp.n; j += stride) {
            double v = 0.0;  // max-pool the block so peaks survive downsampling
            for (int mm = m; mm < std::min(m + stride, sp.n); ++mm)
                for (int jj = j; jj < std::min(j + stride, sp.n); ++jj)
                    v = std::max(v, sp.mags(mm, jj));
            out << ',' << fmt(v);
        }
        out << "\n";
    }
}

void write_subspace_csv(const std::string& path, const Subspace& s) {
    std::ofstream out(path);
    out << "# singular space basis, one vector per row (x_1..x_d, xi_1..xi_d)\n";
    for (int c = 0; c < s.basis.cols(); ++c) {
        for (int i = 0; i < s.basis.rows(); ++i)
            out << (i ? "," : "") << fmt(s.basis(i, c));
        out << "\n";
    }
}

} // namespace

std::string write_artifacts(const ScenarioConfig& sc, const ScenarioArtifacts& art,
                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(out_dir) / sc.name;
    fs::create_directories(dir);

    const fs::path report_path = dir / "report.json";
    {
        std::ofstream out(report_path);
        out << art.report.dump(2) << "\n";
    }
    write_subspace_csv((dir / "singular_space.csv").string(), art.S);
    for (size_t k = 0; k < art.estimates.size(); ++k) {
        const std::string tag = "_t" + std::to_string(k);
        write_directions_csv((dir / ("directions" + tag + ".csv")).string(), art.estimates[k]);
        write_caps_csv((dir / ("flags" + tag + ".csv")).string(), art.estimates[k]);
        write_spectrogram_csv((dir / ("spectrogram" + tag + ".csv")).string(),
                              art.spectrograms[k]);
    }
    return report_path.string();
}

} // namespace gwf
