#include <catch2/catch_amalgamated.hpp>

#include <png.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "segscore/segscore.hpp"

using namespace segscore;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {
constexpr double kTol = 1e-12;

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("segscore_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string render(const MetricReport& r, ReportFormat f) {
    std::ostringstream os;
    emit_report(r, f, os);
    return os.str();
}
}  // namespace

TEST_CASE("pgm round trip") {
    SECTION("2x2 file decodes pixel values as labels") {
        const fs::path p = temp_dir() / "tiny.pgm";
        std::ofstream out(p, std::ios::binary);
        out << "P5\n2 2\n255\n";
        const unsigned char px[4] = {0, 1, 1, 0};
        out.write(reinterpret_cast<const char*>(px), 4);
        out.close();
        const LabelMap m = load_label_map(p);
        CHECK(m.width() == 2);
        CHECK(m.height() == 2);
        CHECK(m.at(0, 0) == 0);
        CHECK(m.at(1, 0) == 1);
        CHECK(m.at(0, 1) == 1);
        CHECK(m.at(1, 1) == 0);
    }
    SECTION("save-then-load of a random map is the identity") {
        std::mt19937 rng(509);
        const LabelMap m = oracles::random_label_map(rng, 13, 9, 5);
        const fs::path p = temp_dir() / "roundtrip.pgm";
        save_label_map(m, p);
        CHECK(load_label_map(p) == m);
    }
    SECTION("16-bit pgm is rejected as unsupported") {
        const fs::path p = temp_dir() / "deep.pgm";
        std::ofstream out(p, std::ios::binary);
        out << "P5\n1 1\n65535\n";
        out.put(0);
        out.put(1);
        out.close();
        CHECK_THROWS_AS(load_label_map(p), ValidationError);
    }
    SECTION("header comments are skipped") {
        const fs::path p = temp_dir() / "comments.pgm";
        std::ofstream out(p, std::ios::binary);
        out << "P5\n# a comment\n2 1\n# another\n255\n";
        out.put(3);
        out.put(4);
        out.close();
        const LabelMap m = load_label_map(p);
        CHECK(m.at(0, 0) == 3);
        CHECK(m.at(1, 0) == 4);
    }
    SECTION("truncated pixel data is an io error") {
        const fs::path p = temp_dir() / "short.pgm";
        std::ofstream out(p, std::ios::binary);
        out << "P5\n4 4\n255\n";
        out.put(0);
        out.close();
        CHECK_THROWS_AS(load_label_map(p), IoError);
    }
    SECTION("missing file is an io error") {
        CHECK_THROWS_AS(load_label_map(temp_dir() / "nope.pgm"), IoError);
    }
    SECTION("garbage magic is unsupported") {
        const fs::path p = temp_dir() / "junk.bin";
        std::ofstream(p, std::ios::binary) << "XYZW";
        CHECK_THROWS_AS(load_label_map(p), ValidationError);
    }
}

namespace {
void write_rgb_png(const fs::path& path) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, 2, 2, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const unsigned char row[6] = {255, 0, 0, 0, 255, 0};
    png_write_row(png, row);
    png_write_row(png, row);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}
}  // namespace

TEST_CASE("png round trip") {
    std::mt19937 rng(521);
    const LabelMap m = oracles::random_label_map(rng, 17, 11, 7);
    const fs::path p = temp_dir() / "roundtrip.png";
    save_label_map(m, p);
    CHECK(load_label_map(p) == m);

    SECTION("labels over 255 cannot be saved to 8-bit formats") {
        LabelMap big = LabelMap::filled(2, 2, 300);
        CHECK_THROWS_AS(save_label_map(big, temp_dir() / "big.pgm"), ValidationError);
    }
    SECTION("rgb png is rejected with a pre-quantize hint") {
        const fs::path rgb = temp_dir() / "rgb.png";
        write_rgb_png(rgb);
        CHECK_THROWS_WITH(load_label_map(rgb),
                          Catch::Matchers::ContainsSubstring("pre-quantize"));
    }
    SECTION("ascii pgm and ppm magics are rejected") {
        const fs::path p2 = temp_dir() / "ascii.pgm";
        std::ofstream(p2, std::ios::binary) << "P2\n1 1\n255\n0\n";
        CHECK_THROWS_AS(load_label_map(p2), ValidationError);
        const fs::path p6 = temp_dir() / "color.ppm";
        std::ofstream(p6, std::ios::binary) << "P6\n1 1\n255\nabc";
        CHECK_THROWS_AS(load_label_map(p6), ValidationError);
    }
}

TEST_CASE("fixture generation") {
    SECTION("s1 pixel counts and confusion") {
        const FixturePair pair = generate_fixture(s1_fixture_spec());
        const ConfusionCounts c = confusion_counts(binarize(pair.auto_map), binarize(pair.gt_map));
        CHECK(c == ConfusionCounts{1225, 0, 5100, 3675});
        CHECK(pair.auto_area == 1225);
        CHECK(pair.area_drift == 0.0);
    }
    SECTION("zero-size auto rect is an error") {
        FixtureSpec spec = s1_fixture_spec();
        spec.auto_rect.width = 0;
        CHECK_THROWS_AS(generate_fixture(spec), ValidationError);
    }
    SECTION("shape exceeding the canvas is an error") {
        FixtureSpec spec = s1_fixture_spec();
        spec.gt_rect.x = 60;
        CHECK_THROWS_AS(generate_fixture(spec), ValidationError);
    }
    SECTION("45-degree rotation keeps the 35x35 area within one percent") {
        FixtureSpec spec = s1_fixture_spec();
        spec.auto_rotation_deg = 45.0;
        const FixturePair pair = generate_fixture(spec);
        CHECK(pair.auto_area >= 1213);
        CHECK(pair.auto_area <= 1237);
        CHECK(binarize(pair.auto_map).foreground_count() == pair.auto_area);
    }
    SECTION("rotation by 0 degrees equals the axis-aligned fill") {
        FixtureSpec spec = rotation_sweep_base();
        const FixturePair plain = generate_fixture(spec);
        spec.auto_rotation_deg = 360.0;  // full turn, same geometry
        const FixturePair turned = generate_fixture(spec);
        CHECK(plain.auto_map == turned.auto_map);
    }
    SECTION("rotated shape leaving the canvas is an error") {
        FixtureSpec spec;
        spec.canvas_width = spec.canvas_height = 40;
        spec.gt_rect = {5, 5, 30, 30};
        spec.auto_rect = {0, 0, 30, 30};
        spec.auto_rotation_deg = 45.0;
        CHECK_THROWS_AS(generate_fixture(spec), ValidationError);
    }
    SECTION("edge-touching variant shares boundary pixels along the image border") {
        // both squares flush with the left edge: their boundary columns
        // overlap there, so bhd drops below 1 (unlike the contained s1 case)
        FixtureSpec spec;
        spec.canvas_width = spec.canvas_height = 100;
        spec.gt_rect = {0, 15, 70, 70};
        spec.auto_rect = {0, 32, 35, 35};
        const FixturePair pair = generate_fixture(spec);
        const BoundarySet b_auto = extract_boundary(binarize(pair.auto_map));
        const BoundarySet b_gt = extract_boundary(binarize(pair.gt_map));
        CHECK(intersection_size(b_auto, b_gt) > 0);
        const MetricValue v = boundary_hamming(b_auto, b_gt);
        CHECK(v.value() < 1.0);
        CHECK(v.value() > 0.0);
    }
}

TEST_CASE("evaluate_pair") {
    const FixturePair pair = generate_fixture(s1_fixture_spec());
    SECTION("s1 fixture against table values") {
        const MetricReport r = evaluate_pair(pair.auto_map, pair.gt_map, MetricSelection::all(), "s1");
        REQUIRE(r.images.size() == 1);
        const MetricMap& m = r.images[0].metrics;
        CHECK(m.at("ji").value.value() == Approx(0.25).margin(kTol));
        CHECK(m.at("dice").value.value() == Approx(0.40).margin(kTol));
        CHECK(m.at("fmi").value.value() == Approx(0.50).margin(kTol));
        CHECK(m.at("ri").value.value() == Approx(0.54).margin(0.005));
        CHECK(m.at("voi").value.value() == Approx(1.26).margin(0.01));
        CHECK(m.at("gce").value.value() == Approx(0.18375).margin(kTol));
        CHECK(m.at("bhd").value.value() == Approx(1.0).margin(kTol));
        CHECK(m.at("tnr").value.value() == Approx(1.0).margin(kTol));
        CHECK(m.at("tpr").value.value() == Approx(0.25).margin(kTol));
        CHECK(m.at("fnr").value.value() == Approx(0.75).margin(kTol));
        CHECK(m.at("precision").value.value() == Approx(1.0).margin(kTol));
        CHECK(m.at("f").value.value() == Approx(0.20).margin(kTol));
        CHECK(m.at("xor").value.value() == Approx(0.75).margin(kTol));
        CHECK(m.at("ac").value.value() == Approx(0.6325).margin(kTol));
        CHECK(m.at("pri").value.value() == m.at("ri").value.value());
        CHECK(m.count("npr") == 0);  // needs dataset context
        CHECK_FALSE(m.at("plr").value.is_defined());
    }
    SECTION("identical prediction and gt hit every perfect pole") {
        const MetricReport r =
            evaluate_pair(pair.gt_map, pair.gt_map, MetricSelection::all(), "self");
        const MetricMap& m = r.images[0].metrics;
        for (const char* one : {"ji", "dice", "fmi", "ri", "pri", "nmi", "ac", "tpr", "tnr"})
            CHECK(m.at(one).value.value() == Approx(1.0).margin(kTol));
        for (const char* zero : {"xor", "mce", "er", "voi", "lce", "gce", "bce", "hausd", "masd",
                                 "asd", "nsd", "bde", "hd", "bhd", "ep", "vd", "fpr", "fnr"})
            CHECK(m.at(zero).value.value() == Approx(0.0).margin(kTol));
        CHECK_FALSE(m.at("plr").value.is_defined());
    }
    SECTION("empty selection yields an empty report without error") {
        const MetricReport r = evaluate_pair(pair.auto_map, pair.gt_map, MetricSelection::none());
        CHECK(r.images[0].metrics.empty());
        CHECK(r.aggregates.empty());
    }
    SECTION("multiple ground truths add per-gt sections") {
        std::vector<LabelMap> gts{pair.gt_map, pair.auto_map};
        const MetricReport r = evaluate_pair(
            pair.auto_map, std::span<const LabelMap>(gts), MetricSelection::of({"ji", "pri"}), "multi");
        REQUIRE(r.images[0].per_gt.size() == 2);
        CHECK(r.images[0].per_gt[0].metrics.at("ji").value.value() == Approx(0.25).margin(kTol));
        CHECK(r.images[0].per_gt[1].metrics.at("ji").value.value() == Approx(1.0).margin(kTol));
        const double expected_pri =
            (rand_index(pair.auto_map, pair.gt_map) + 1.0) / 2.0;
        CHECK(r.images[0].metrics.at("pri").value.value() == Approx(expected_pri).margin(kTol));
    }
    SECTION("dimension mismatch aborts the evaluation") {
        CHECK_THROWS_AS(
            evaluate_pair(pair.auto_map, LabelMap::filled(10, 10), MetricSelection::all()),
            ValidationError);
    }
    SECTION("selection rejects unknown names") {
        CHECK_THROWS_AS(MetricSelection::of({"bogus"}), ValidationError);
    }
}

TEST_CASE("evaluate_dataset") {
    // image "a": RI 0.5 against its gt; image "b": RI 0.9
    const LabelMap a_pred(2, 2, {1, 0, 0, 0});
    const LabelMap a_gt(2, 2, {1, 1, 0, 0});
    const LabelMap b_pred(5, 1, {0, 0, 1, 1, 2});
    const LabelMap b_gt(5, 1, {0, 0, 1, 3, 2});
    REQUIRE(rand_index(a_pred, a_gt) == Approx(0.5).margin(kTol));
    REQUIRE(rand_index(b_pred, b_gt) == Approx(0.9).margin(kTol));

    Dataset ds;
    ds.entries.push_back({"a", a_pred, {a_gt}});
    ds.entries.push_back({"b", b_pred, {b_gt}});

    SECTION("npr normalization over the dataset") {
        const MetricReport r = evaluate_dataset(ds, MetricSelection::of({"pri", "npr"}));
        REQUIRE(r.images.size() == 2);
        CHECK(r.images[0].id == "a");
        CHECK(r.images[0].metrics.at("npr").value.value() == Approx(-1.0).margin(kTol));
        CHECK(r.images[1].metrics.at("npr").value.value() == Approx(1.0).margin(kTol));
        CHECK(r.aggregates.at("pri").mean.value() == Approx(0.7).margin(kTol));
    }
    SECTION("single-image dataset has undefined npr with a reason") {
        Dataset one;
        one.entries.push_back({"only", a_pred, {a_gt}});
        const MetricReport r = evaluate_dataset(one, MetricSelection::of({"npr"}));
        const MetricEntry& e = r.images[0].metrics.at("npr");
        CHECK_FALSE(e.value.is_defined());
        CHECK_THAT(e.value.reason(), Catch::Matchers::ContainsSubstring("degenerate dataset"));
    }
    SECTION("prediction equal to its only gt pins npr at 1") {
        Dataset mixed;
        mixed.entries.push_back({"worse", a_pred, {a_gt}});
        mixed.entries.push_back({"exact", b_gt, {b_gt}});
        const MetricReport r = evaluate_dataset(mixed, MetricSelection::of({"pri", "npr"}));
        CHECK(r.images[0].id == "exact");
        CHECK(r.images[0].metrics.at("pri").value.value() == Approx(1.0).margin(kTol));
        CHECK(r.images[0].metrics.at("npr").value.value() == Approx(1.0).margin(kTol));
    }
    SECTION("entry permutation changes nothing") {
        const MetricReport fwd = evaluate_dataset(ds, MetricSelection::all());
        Dataset rev;
        rev.entries.push_back(ds.entries[1]);
        rev.entries.push_back(ds.entries[0]);
        const MetricReport bwd = evaluate_dataset(rev, MetricSelection::all());
        CHECK(render(fwd, ReportFormat::Json) == render(bwd, ReportFormat::Json));
        CHECK(render(fwd, ReportFormat::Csv) == render(bwd, ReportFormat::Csv));
    }
    SECTION("duplicate image ids are rejected") {
        Dataset dup;
        dup.entries.push_back({"x", a_pred, {a_gt}});
        dup.entries.push_back({"x", b_pred, {b_gt}});
        CHECK_THROWS_AS(evaluate_dataset(dup, MetricSelection::all()), ValidationError);
    }
    SECTION("parallel evaluation matches single-threaded byte for byte") {
        Dataset big;
        std::mt19937 rng(541);
        for (int i = 0; i < 12; ++i) {
            const LabelMap pred = oracles::random_label_map(rng, 12, 12, 2);
            const LabelMap gt = oracles::random_label_map(rng, 12, 12, 2);
            big.entries.push_back({"img" + std::to_string(i), pred, {gt}});
        }
        setenv("SEGSCORE_THREADS", "1", 1);
        const std::string serial = render(evaluate_dataset(big, MetricSelection::all()),
                                          ReportFormat::Json);
        setenv("SEGSCORE_THREADS", "4", 1);
        const std::string parallel = render(evaluate_dataset(big, MetricSelection::all()),
                                            ReportFormat::Json);
        unsetenv("SEGSCORE_THREADS");
        CHECK(serial == parallel);
    }
}

TEST_CASE("perturbation sweep") {
    SECTION("rotation sweep trends match the expected directions") {
        const double steps[] = {0, 15, 30, 45};
        const SweepResult r = perturbation_sweep(rotation_sweep_base(), SweepKind::Rotation,
                                                 std::span<const double>(steps),
                                                 MetricSelection::of({"ji", "bhd"}));
        REQUIRE(r.reports.size() == 4);
        CHECK(r.trends.at("ji") == "monotone-down");
        CHECK(r.trends.at("bhd") == "monotone-up");
    }
    SECTION("zero-length sweep equals a single pair evaluation") {
        const SweepResult r = perturbation_sweep(s1_fixture_spec(), SweepKind::Rotation,
                                                 std::span<const double>(),
                                                 MetricSelection::of({"ji"}));
        REQUIRE(r.reports.size() == 1);
        const FixturePair pair = generate_fixture(s1_fixture_spec());
        const MetricReport direct =
            evaluate_pair(pair.auto_map, pair.gt_map, MetricSelection::of({"ji"}), "step_0");
        CHECK(render(r.reports[0], ReportFormat::Json) == render(direct, ReportFormat::Json));
    }
    SECTION("translation of identical squares walks hausdorff linearly") {
        const double steps[] = {0, 5, 10};
        const SweepResult r = perturbation_sweep(translation_sweep_base(), SweepKind::Translation,
                                                 std::span<const double>(steps),
                                                 MetricSelection::of({"hausd"}));
        REQUIRE(r.reports.size() == 3);
        CHECK(r.reports[0].images[0].metrics.at("hausd").value.value() == 0.0);
        CHECK(r.reports[1].images[0].metrics.at("hausd").value.value() == 5.0);
        CHECK(r.reports[2].images[0].metrics.at("hausd").value.value() == 10.0);
        CHECK(r.trends.at("hausd") == "monotone-up");
    }
    SECTION("non-monotone steps are rejected") {
        const double steps[] = {0, 10, 5};
        CHECK_THROWS_AS(perturbation_sweep(translation_sweep_base(), SweepKind::Translation,
                                           std::span<const double>(steps), MetricSelection::all()),
                        ValidationError);
    }
    SECTION("steps that push the shape off canvas are rejected") {
        const double steps[] = {0, 50};
        CHECK_THROWS_AS(perturbation_sweep(translation_sweep_base(), SweepKind::Translation,
                                           std::span<const double>(steps), MetricSelection::all()),
                        ValidationError);
    }
}

TEST_CASE("report emission") {
    const FixturePair pair = generate_fixture(s1_fixture_spec());
    const MetricReport r =
        evaluate_pair(pair.auto_map, pair.gt_map, MetricSelection::all(), "s1");

    SECTION("json parses back with equal values") {
        const std::string text = render(r, ReportFormat::Json);
        const nlohmann::json parsed = nlohmann::json::parse(text);
        CHECK(parsed["schema_version"] == 1);
        CHECK(parsed["parameters"]["entropy_base"] == 2);
        CHECK(parsed["parameters"]["boundary_connectivity"] == 4);
        CHECK(parsed["images"][0]["id"] == "s1");
        CHECK(parsed["images"][0]["metrics"]["ji"]["value"].get<double>() == 0.25);
        CHECK(parsed["images"][0]["metrics"]["ji"]["polarity"] == "higher_better");
        // undefined plr serializes as null plus a reason
        CHECK(parsed["images"][0]["metrics"]["plr"]["value"].is_null());
        CHECK(parsed["images"][0]["metrics"]["plr"].contains("reason"));
        // re-render after parse keeps byte identity of numbers
        CHECK(render(r, ReportFormat::Json) == text);
    }
    SECTION("csv is deterministic and sorted") {
        const std::string a = render(r, ReportFormat::Csv);
        const std::string b = render(r, ReportFormat::Csv);
        CHECK(a == b);
        CHECK_THAT(a, Catch::Matchers::StartsWith("image_id,metric,value,polarity,reason"));
        CHECK_THAT(a, Catch::Matchers::ContainsSubstring("s1,ji,0.25,higher_better,"));
    }
    SECTION("values are rendered with six significant digits") {
        const nlohmann::json parsed = nlohmann::json::parse(render(r, ReportFormat::Json));
        CHECK(parsed["images"][0]["metrics"]["ri"]["value"].get<double>() ==
              Approx(0.535066).margin(1e-9));
    }
}
