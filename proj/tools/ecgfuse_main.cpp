// ecgfuse_main.cpp - command line front end for the ecgfuse library.
//
// Subcommands: embed, lwlpa-predict, dower, synth, noise, fuse, metrics.
// Exit codes: 0 success, 1 usage error, 2 data error (unreadable files,
// malformed records, series unfit for the requested operation).
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ecgfuse/ecgfuse.hpp>

namespace {

using ecgfuse::EmbeddingParams;
using ecgfuse::MultiLeadRecord;
using ecgfuse::TimeSeries;
using ecgfuse::Trajectory;

const TimeSeries& pick_lead(const MultiLeadRecord& record, const std::string& name) {
    if (name.empty()) return record.leads.front();
    const TimeSeries* lead = record.find(name);
    if (!lead)
        throw ecgfuse::Error("record '" + record.id + "' has no lead named '" + name + "'");
    return *lead;
}

EmbeddingParams estimate_params(const TimeSeries& lead, int m, int tau, int max_tau,
                                int max_m) {
    EmbeddingParams p;
    p.delay = tau > 0 ? tau : ecgfuse::estimate_delay_ad(lead, max_tau);
    p.dimension =
        m > 0 ? m : ecgfuse::estimate_dimension_fnn(lead, p.delay, max_m).dimension;
    return p;
}

// ---------------------------------------------------------------------------
// embed: one lead of a record -> delay-embedded trajectory
// ---------------------------------------------------------------------------

struct EmbedArgs {
    std::string input, lead, output;
    int m = 0, tau = 0, max_tau = 60, max_m = 10;
};

void run_embed(const EmbedArgs& args) {
    const auto record = ecgfuse::read_record(args.input);
    const auto& lead = pick_lead(record, args.lead);
    const auto params = estimate_params(lead, args.m, args.tau, args.max_tau, args.max_m);
    const auto traj = ecgfuse::delay_embed(lead, params);
    if (!args.output.empty()) ecgfuse::write_trajectory(traj, args.output);
    std::cout << "lead=" << lead.label << " m=" << params.dimension
              << " tau=" << params.delay << " states=" << traj.size();
    if (!args.output.empty()) std::cout << " -> " << args.output;
    std::cout << "\n";
}

// ---------------------------------------------------------------------------
// lwlpa-predict: local weighted linear prediction from a trajectory
// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string input, output;
    int query = -1, neighbors = 0, horizon = 1, theiler = 0;
    double lambda = 1.0;
};

void run_predict(const PredictArgs& args) {
    auto traj = ecgfuse::read_trajectory(args.input);
    if (traj.empty()) throw ecgfuse::EmptyTrajectory("'" + args.input + "' has no states");
    const std::size_t original = traj.size();
    std::size_t query =
        args.query >= 0 ? static_cast<std::size_t>(args.query) : original - 1;
    const std::size_t count =
        args.neighbors > 0 ? static_cast<std::size_t>(args.neighbors)
                           : ecgfuse::default_neighbor_count(traj.dimension());

    Trajectory predicted(traj.dimension(), traj.params(),
                         traj.source_label() + "+pred", traj.sample_rate_hz());
    for (int step = 0; step < args.horizon; ++step) {
        ecgfuse::NeighborOptions opts;
        opts.search_end = original - 1;  // synthetic states never serve as neighbors
        opts.theiler_window = static_cast<std::size_t>(args.theiler);
        const auto next = ecgfuse::predict_next(traj, query, count, args.lambda, opts);
        predicted.push_state(next);
        traj.push_state(next);
        query = traj.size() - 1;
    }
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        const auto st = predicted.state(p);
        for (std::size_t c = 0; c < st.size(); ++c)
            std::cout << (c ? "," : "") << ecgfuse::detail::format_double(st[c]);
        std::cout << "\n";
    }
    if (!args.output.empty()) ecgfuse::write_trajectory(predicted, args.output);
}

// ---------------------------------------------------------------------------
// dower: 12-lead (or 8-lead) record -> orthogonal Vx/Vy/Vz record
// ---------------------------------------------------------------------------

struct DowerArgs {
    std::string input, output, matrix;
    double epsilon = ecgfuse::kDefaultConstantLeadEpsilon;
    bool no_constant_check = false;
};

void run_dower(const DowerArgs& args) {
    const auto record = ecgfuse::read_record(args.input);
    if (!args.no_constant_check) {
        const auto flagged = ecgfuse::detect_constant_leads(record, args.epsilon);
        if (!flagged.empty()) {
            std::string names;
            for (const auto& n : flagged) names += (names.empty() ? "" : ", ") + n;
            throw ecgfuse::Error("constant leads detected: " + names +
                                 " (pass --no-constant-check to override)");
        }
    }
    const auto eight = ecgfuse::select_eight_leads(record);
    const auto matrix = args.matrix.empty() ? ecgfuse::default_inverse_dower()
                                            : ecgfuse::load_dower_matrix(args.matrix);
    const auto vcg = ecgfuse::inverse_dower(eight, matrix);
    ecgfuse::write_record(vcg, args.output);
    std::cout << "wrote " << args.output << " (" << vcg.leads.size() << " leads, "
              << vcg.length() << " samples at " << vcg.sample_rate_hz << " Hz)\n";
}

// ---------------------------------------------------------------------------
// synth: synthetic orthogonal-lead record
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string output;
    double fs = 500.0, duration = 10.0, hr = 60.0;
    double baseline_amplitude = 0.0, baseline_freq = 0.25;
};

void run_synth(const SynthArgs& args) {
    auto model = ecgfuse::default_ecg_model();
    model.heart_rate_bpm = args.hr;
    model.baseline_amplitude = args.baseline_amplitude;
    model.baseline_freq_hz = args.baseline_freq;
    const auto vcg = ecgfuse::synth_vcg(model, args.fs, args.duration);
    ecgfuse::write_record(vcg, args.output);
    std::cout << "wrote " << args.output << " (" << vcg.length() << " samples at "
              << args.fs << " Hz, " << args.hr << " bpm)\n";
}

// ---------------------------------------------------------------------------
// noise: corrupt record leads at a calibrated signal-to-noise ratio
// ---------------------------------------------------------------------------

struct NoiseArgs {
    std::string input, output, kind, source, lead;
    double snr = 0.0;
    std::uint64_t seed = 0;
    std::size_t offset = 0;
};

void run_noise(const NoiseArgs& args) {
    auto record = ecgfuse::read_record(args.input);
    const auto kind = ecgfuse::noise_kind_from_string(args.kind);

    ecgfuse::NoiseSpec spec;
    spec.kind = kind;
    spec.target_snr_db = args.snr;
    spec.offset = args.offset;
    if (!args.source.empty()) {
        spec.source = ecgfuse::load_noise_record(args.source, kind);
    } else {
        const double margin = 8.0 / record.sample_rate_hz;
        const double duration =
            static_cast<double>(record.length() + args.offset) / record.sample_rate_hz;
        spec.source = ecgfuse::make_noise(kind, record.sample_rate_hz,
                                          duration + margin, args.seed);
    }

    std::size_t corrupted = 0;
    for (auto& lead : record.leads) {
        if (!args.lead.empty() && lead.label != args.lead) continue;
        const std::string label = lead.label;
        lead = ecgfuse::apply_noise(lead, spec);
        lead.label = label;
        ++corrupted;
    }
    if (corrupted == 0)
        throw ecgfuse::Error("record '" + record.id + "' has no lead named '" +
                             args.lead + "'");
    ecgfuse::write_record(record, args.output);
    std::cout << "wrote " << args.output << " (" << corrupted << " lead"
              << (corrupted == 1 ? "" : "s") << " at " << args.snr << " dB "
              << ecgfuse::noise_kind_name(kind) << ")\n";
}

// ---------------------------------------------------------------------------
// fuse: multi-lead record -> fused trajectory plus disorder metrics
// ---------------------------------------------------------------------------

struct FuseArgs {
    std::string input, output, metrics, config;
    std::string normalization = "global-max";
    int m = 0, tau = 0, max_tau = 60, max_m = 10, bootstrap = 3;
    double gamma = 1.0;
};

ecgfuse::FisPair resolve_fis(const std::string& config_flag) {
    if (!config_flag.empty()) return ecgfuse::load_fis_config(config_flag);
    if (const char* env = std::getenv("ECGFUSE_FIS_CONFIG"); env && *env)
        return ecgfuse::load_fis_config(env);
    return ecgfuse::default_fis();
}

void run_fuse(const FuseArgs& args) {
    const auto record = ecgfuse::read_record(args.input);
    if (record.leads.size() < 2)
        throw ecgfuse::TooFewTrajectories("fusion needs >= 2 leads, record '" +
                                          record.id + "' has " +
                                          std::to_string(record.leads.size()));

    EmbeddingParams joint;
    if (args.m > 0 && args.tau > 0) {
        joint = EmbeddingParams{args.m, args.tau};
    } else {
        std::vector<EmbeddingParams> per_lead;
        for (const auto& lead : record.leads)
            per_lead.push_back(
                estimate_params(lead, args.m, args.tau, args.max_tau, args.max_m));
        joint = ecgfuse::select_joint_params(per_lead);
    }

    std::vector<Trajectory> trajs;
    for (const auto& lead : record.leads) trajs.push_back(ecgfuse::delay_embed(lead, joint));

    ecgfuse::FusionConfig config;
    config.gamma = args.gamma;
    config.bootstrap_steps = args.bootstrap;
    if (args.normalization == "global-max")
        config.normalization = ecgfuse::Normalization::global_max;
    else if (args.normalization == "amplitude-range")
        config.normalization = ecgfuse::Normalization::amplitude_range;
    else
        throw CLI::ValidationError("--normalization",
                                   "expected global-max or amplitude-range");
    auto fis = resolve_fis(args.config);
    config.fis_d = std::move(fis.fis_d);
    config.fis_alpha = std::move(fis.fis_alpha);

    const auto fused = ecgfuse::fuse(trajs, config);
    const double disorder = ecgfuse::disorder_metric(fused);
    if (!args.output.empty()) ecgfuse::write_trajectory(fused, args.output);

    nlohmann::json leads_json = nlohmann::json::object();
    for (std::size_t l = 0; l < trajs.size(); ++l)
        leads_json[record.leads[l].label] = ecgfuse::disorder_metric(trajs[l]);
    if (!args.metrics.empty()) {
        nlohmann::json doc{{"input", args.input},
                           {"sample_rate_hz", record.sample_rate_hz},
                           {"dimension", joint.dimension},
                           {"delay", joint.delay},
                           {"states", fused.size()},
                           {"disorder_fused", disorder},
                           {"disorder_leads", leads_json}};
        std::ofstream out(args.metrics);
        if (!out) throw ecgfuse::IoError("cannot open '" + args.metrics + "' for writing");
        out << doc.dump(2) << "\n";
    }
    std::cout << "fused " << trajs.size() << " leads -> " << fused.size()
              << " states (m=" << joint.dimension << ", tau=" << joint.delay
              << "), disorder=" << ecgfuse::detail::format_double(disorder) << "\n";
}

// ---------------------------------------------------------------------------
// metrics: disorder report for a stored trajectory
// ---------------------------------------------------------------------------

struct MetricsArgs {
    std::string traj;
    bool as_json = false;
};

void run_metrics(const MetricsArgs& args) {
    const auto traj = ecgfuse::read_trajectory(args.traj);
    const double disorder = ecgfuse::disorder_metric(traj);
    if (args.as_json) {
        nlohmann::json doc{{"trajectory", args.traj},
                           {"states", traj.size()},
                           {"dimension", traj.dimension()},
                           {"delay", traj.params().delay},
                           {"disorder", disorder}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "states=" << traj.size() << " dimension=" << traj.dimension()
                  << " delay=" << traj.params().delay
                  << " disorder=" << ecgfuse::detail::format_double(disorder) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecgfuse: fuse multi-lead physiological records into one "
                 "reconstructed-phase-space trajectory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ecgfuse 1.0.0");

    EmbedArgs embed_args;
    auto* embed = app.add_subcommand("embed", "delay-embed one lead of a record");
    embed->add_option("input", embed_args.input, "record CSV")->required();
    embed->add_option("--lead", embed_args.lead, "lead name (default: first)");
    embed->add_option("--m", embed_args.m, "embedding dimension (0 = estimate)");
    embed->add_option("--tau", embed_args.tau, "embedding delay (0 = estimate)");
    embed->add_option("--max-tau", embed_args.max_tau, "delay search bound");
    embed->add_option("--max-m", embed_args.max_m, "dimension search bound");
    embed->add_option("-o,--output", embed_args.output, "trajectory CSV to write");
    embed->callback([&] { run_embed(embed_args); });

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("lwlpa-predict",
                                       "predict ahead from a stored trajectory");
    predict->add_option("input", predict_args.input, "trajectory CSV")->required();
    predict->add_option("--query", predict_args.query,
                        "state index to predict from (default: last)");
    predict->add_option("--neighbors", predict_args.neighbors,
                        "neighbor count (0 = 2(m+1))");
    predict->add_option("--lambda", predict_args.lambda, "neighbor weight decay");
    predict->add_option("--horizon", predict_args.horizon, "steps to predict")
        ->check(CLI::PositiveNumber);
    predict->add_option("--theiler", predict_args.theiler,
                        "temporal neighbor exclusion window");
    predict->add_option("-o,--output", predict_args.output, "trajectory CSV to write");
    predict->callback([&] { run_predict(predict_args); });

    DowerArgs dower_args;
    auto* dower = app.add_subcommand("dower",
                                     "reduce a standard record to orthogonal leads");
    dower->add_option("input", dower_args.input, "record CSV")->required();
    dower->add_option("-o,--output", dower_args.output, "record CSV to write")
        ->required();
    dower->add_option("--matrix", dower_args.matrix, "reduction matrix JSON");
    dower->add_option("--epsilon", dower_args.epsilon,
                      "constant-lead amplitude threshold");
    dower->add_flag("--no-constant-check", dower_args.no_constant_check,
                    "skip the constant-lead screen");
    dower->callback([&] { run_dower(dower_args); });

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic orthogonal record");
    synth->add_option("-o,--output", synth_args.output, "record CSV to write")
        ->required();
    synth->add_option("--fs", synth_args.fs, "sample rate in Hz");
    synth->add_option("--duration", synth_args.duration, "length in seconds");
    synth->add_option("--hr", synth_args.hr, "heart rate in bpm");
    synth->add_option("--baseline-amplitude", synth_args.baseline_amplitude,
                      "baseline wander amplitude");
    synth->add_option("--baseline-freq", synth_args.baseline_freq,
                      "baseline wander frequency in Hz");
    synth->callback([&] { run_synth(synth_args); });

    NoiseArgs noise_args;
    auto* noise = app.add_subcommand("noise", "corrupt leads at a target SNR");
    noise->add_option("input", noise_args.input, "record CSV")->required();
    noise->add_option("--kind", noise_args.kind, "noise kind: BW, EM, or MA")
        ->required()
        ->check(CLI::IsMember({"BW", "EM", "MA"}, CLI::ignore_case));
    noise->add_option("--snr", noise_args.snr, "target SNR in dB")->required();
    noise->add_option("-o,--output", noise_args.output, "record CSV to write")
        ->required();
    noise->add_option("--source", noise_args.source,
                      "noise record CSV (default: synthesized)");
    noise->add_option("--seed", noise_args.seed, "seed for synthesized noise");
    noise->add_option("--offset", noise_args.offset, "noise source offset in samples");
    noise->add_option("--lead", noise_args.lead, "single lead to corrupt (default: all)");
    noise->callback([&] { run_noise(noise_args); });

    FuseArgs fuse_args;
    auto* fuse = app.add_subcommand("fuse", "fuse record leads into one trajectory");
    fuse->add_option("input", fuse_args.input, "record CSV")->required();
    fuse->add_option("-o,--output", fuse_args.output, "trajectory CSV to write");
    fuse->add_option("--metrics", fuse_args.metrics, "metrics JSON to write");
    fuse->add_option("--m", fuse_args.m, "embedding dimension (0 = estimate)");
    fuse->add_option("--tau", fuse_args.tau, "embedding delay (0 = estimate)");
    fuse->add_option("--max-tau", fuse_args.max_tau, "delay search bound");
    fuse->add_option("--max-m", fuse_args.max_m, "dimension search bound");
    fuse->add_option("--gamma", fuse_args.gamma, "softmax sharpness");
    fuse->add_option("--bootstrap", fuse_args.bootstrap, "uniform-weight lead-in steps");
    fuse->add_option("--normalization", fuse_args.normalization,
                     "global-max or amplitude-range")
        ->check(CLI::IsMember({"global-max", "amplitude-range"}));
    fuse->add_option("--config", fuse_args.config,
                     "fuzzy-system JSON (default: $ECGFUSE_FIS_CONFIG or built-ins)");
    fuse->callback([&] { run_fuse(fuse_args); });

    MetricsArgs metrics_args;
    auto* metrics = app.add_subcommand("metrics", "report metrics for a trajectory");
    metrics->add_option("--traj", metrics_args.traj, "trajectory CSV")->required();
    metrics->add_flag("--json", metrics_args.as_json, "emit JSON instead of text");
    metrics->callback([&] { run_metrics(metrics_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
