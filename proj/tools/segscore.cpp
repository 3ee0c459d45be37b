// segscore: segmentation evaluation metrics over label-map images.
//
// Subcommands:
//   eval      compare one prediction against one or more ground truths
//   dataset   evaluate a manifest of images, with dataset-level NPR
//   fixtures  write the built-in synthetic test images
//   sweep     evaluate a rotation or translation perturbation series
//
// Exit codes: 0 success, 1 bad arguments, 2 I/O error, 3 input validation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segscore/segscore.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

segscore::MetricSelection parse_metrics(const std::string& arg) {
    if (arg == "all") return segscore::MetricSelection::all();
    if (arg.empty()) return segscore::MetricSelection::none();
    try {
        return segscore::MetricSelection::of(split_commas(arg));
    } catch (const segscore::ValidationError& e) {
        throw CLI::ValidationError("--metrics", e.what());    // bad arguments, exit 1
    }
}

segscore::ReportFormat parse_format(const std::string& arg) {
    if (arg == "json") return segscore::ReportFormat::Json;
    if (arg == "csv") return segscore::ReportFormat::Csv;
    throw CLI::ValidationError("--format", "must be json or csv");
}

void write_or_print(const std::string& out_path, const std::function<void(std::ostream&)>& emit) {
    if (out_path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw segscore::IoError(out_path + ": cannot open for writing");
    emit(out);
    out.flush();
    if (!out) throw segscore::IoError(out_path + ": write failure");
}

std::vector<double> parse_number_list(const std::string& arg, const char* what) {
    std::vector<double> out;
    for (const std::string& tok : split_commas(arg)) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + tok + "' is not a number");
        }
    }
    return out;
}

segscore::Dataset load_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw segscore::IoError(manifest_path.string() + ": cannot open for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw segscore::ValidationError(manifest_path.string() + ": malformed manifest JSON (" +
                                        e.what() + ")");
    }
    if (!j.is_array())
        throw segscore::ValidationError(manifest_path.string() +
                                        ": manifest must be a JSON array of entries");
    const fs::path base = manifest_path.parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    segscore::Dataset ds;
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("pred") ||
            !entry.contains("gts") || !entry["gts"].is_array() || entry["gts"].empty())
            throw segscore::ValidationError(
                manifest_path.string() +
                ": each manifest entry needs {id, pred, gts:[...]} with at least one gt");
        std::vector<segscore::LabelMap> gts;
        for (const auto& g : entry["gts"])
            gts.push_back(segscore::load_label_map(resolve(g.get<std::string>())));
        ds.entries.push_back({entry["id"].get<std::string>(),
                              segscore::load_label_map(resolve(entry["pred"].get<std::string>())),
                              std::move(gts)});
    }
    return ds;
}

int run_eval(const std::string& pred, const std::string& gt_arg, const std::string& metrics_arg,
             const std::string& format_arg, const std::string& out_path) {
    const segscore::MetricSelection sel = parse_metrics(metrics_arg);
    const segscore::ReportFormat format = parse_format(format_arg);
    const segscore::LabelMap pred_map = segscore::load_label_map(pred);
    std::vector<segscore::LabelMap> gts;
    for (const std::string& g : split_commas(gt_arg)) gts.push_back(segscore::load_label_map(g));
    if (gts.empty()) throw CLI::ValidationError("--gt", "needs at least one path");

    const std::string id = fs::path(pred).stem().string();
    const segscore::MetricReport report =
        segscore::evaluate_pair(pred_map, std::span<const segscore::LabelMap>(gts), sel, id);
    write_or_print(out_path, [&](std::ostream& os) { segscore::emit_report(report, format, os); });
    return kExitOk;
}

int run_dataset(const std::string& manifest, const std::string& metrics_arg,
                const std::string& format_arg, const std::string& out_path) {
    const segscore::MetricSelection sel = parse_metrics(metrics_arg);
    const segscore::ReportFormat format = parse_format(format_arg);
    const segscore::Dataset ds = load_manifest(manifest);
    const segscore::MetricReport report = segscore::evaluate_dataset(ds, sel);
    write_or_print(out_path, [&](std::ostream& os) { segscore::emit_report(report, format, os); });
    return kExitOk;
}

int run_fixtures(const std::string& out_dir, const std::string& which, const std::string& angles_arg) {
    if (which != "s1" && which != "rotations")
        throw CLI::ValidationError("--which", "must be s1 or rotations");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw segscore::IoError(out_dir + ": cannot create directory (" + ec.message() + ")");

    auto save = [&](const segscore::LabelMap& m, const std::string& name) {
        const fs::path p = fs::path(out_dir) / name;
        segscore::save_label_map(m, p);
        std::cout << p.string() << "\n";
    };

    if (which == "s1") {
        const segscore::FixturePair pair = segscore::generate_fixture(segscore::s1_fixture_spec());
        save(pair.auto_map, "s1_auto.pgm");
        save(pair.gt_map, "s1_gt.pgm");
        return kExitOk;
    }

    const std::vector<double> angles = parse_number_list(angles_arg, "--angles");
    if (angles.empty()) throw CLI::ValidationError("--angles", "needs at least one angle");
    const segscore::FixtureSpec base = segscore::rotation_sweep_base();
    bool wrote_gt = false;
    for (double a : angles) {
        segscore::FixtureSpec spec = base;
        spec.auto_rotation_deg = a;
        const segscore::FixturePair pair = segscore::generate_fixture(spec);
        if (!wrote_gt) {
            save(pair.gt_map, "rot_gt.pgm");
            wrote_gt = true;
        }
        save(pair.auto_map, "rot_auto_" + segscore::detail::format_step(a) + ".pgm");
    }
    return kExitOk;
}

int run_sweep(const std::string& which, const std::string& steps_arg, const std::string& metrics_arg,
              const std::string& format_arg, const std::string& out_path) {
    segscore::SweepKind kind;
    segscore::FixtureSpec base;
    if (which == "rotation") {
        kind = segscore::SweepKind::Rotation;
        base = segscore::rotation_sweep_base();
    } else if (which == "translation") {
        kind = segscore::SweepKind::Translation;
        base = segscore::translation_sweep_base();
    } else {
        throw CLI::ValidationError("--which", "must be rotation or translation");
    }
    const segscore::MetricSelection sel = parse_metrics(metrics_arg);
    const segscore::ReportFormat format = parse_format(format_arg);
    const std::vector<double> steps = parse_number_list(steps_arg, "--steps");
    const segscore::SweepResult result =
        segscore::perturbation_sweep(base, kind, std::span<const double>(steps), sel);
    write_or_print(out_path, [&](std::ostream& os) { segscore::emit_sweep(result, format, os); });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"segscore: quantitative segmentation evaluation metrics"};
    app.set_version_flag("--version", segscore::kVersion);
    app.require_subcommand(1);

    std::string pred, gt_arg, metrics_arg = "all", format_arg = "json", out_path;
    std::string manifest, which_fixtures = "s1", which_sweep, angles_arg = "0,15,30,45", steps_arg;
    std::string fixtures_out;

    CLI::App* eval = app.add_subcommand("eval", "Evaluate one prediction against ground truth(s)");
    eval->add_option("--pred", pred, "Prediction label map (PGM or PNG)")->required();
    eval->add_option("--gt", gt_arg, "Ground-truth label map path(s), comma-separated")->required();
    eval->add_option("--metrics", metrics_arg, "all or comma-separated metric names");
    eval->add_option("--format", format_arg, "json or csv");
    eval->add_option("--out", out_path, "Output path (default: stdout)");

    CLI::App* dataset = app.add_subcommand("dataset", "Evaluate a dataset manifest");
    dataset->add_option("--manifest", manifest, "JSON manifest: [{id, pred, gts:[...]}]")->required();
    dataset->add_option("--metrics", metrics_arg, "all or comma-separated metric names");
    dataset->add_option("--format", format_arg, "json or csv");
    dataset->add_option("--out", out_path, "Output path (default: stdout)");

    CLI::App* fixtures = app.add_subcommand("fixtures", "Write built-in synthetic test images");
    fixtures->add_option("--out", fixtures_out, "Output directory")->required();
    fixtures->add_option("--which", which_fixtures, "s1 or rotations");
    fixtures->add_option("--angles", angles_arg, "Rotation angles in degrees, comma-separated");

    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate a perturbation sweep");
    sweep->add_option("--which", which_sweep, "rotation or translation")->required();
    sweep->add_option("--steps", steps_arg, "Perturbation steps, comma-separated")->required();
    sweep->add_option("--metrics", metrics_arg, "all or comma-separated metric names");
    sweep->add_option("--format", format_arg, "json or csv");
    sweep->add_option("--out", out_path, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (eval->parsed()) return run_eval(pred, gt_arg, metrics_arg, format_arg, out_path);
        if (dataset->parsed()) return run_dataset(manifest, metrics_arg, format_arg, out_path);
        if (fixtures->parsed()) return run_fixtures(fixtures_out, which_fixtures, angles_arg);
        if (sweep->parsed()) return run_sweep(which_sweep, steps_arg, metrics_arg, format_arg, out_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const segscore::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const segscore::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitBadArgs;
}
