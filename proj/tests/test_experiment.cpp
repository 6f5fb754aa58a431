#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "a0c/experiment.hpp"
#include "a0c/plot.hpp"

namespace {

a0c::Config small_config() {
    a0c::Config cfg;
    cfg.horizon = 40;
    cfg.n_trace = 2;
    cfg.repetitions = 2;
    cfg.budget_accounted_steps = 160;  // two 40-step episodes per repetition
    cfg.buffer_capacity = 500;
    cfg.seed = 11;
    return cfg;
}

/// Minimal XML well-formedness check: tag balance, quoted attributes, one
/// root element.
bool xml_well_formed(const std::string& doc) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    int roots = 0;
    if (doc.rfind("<?xml", 0) == 0) {
        i = doc.find("?>");
        if (i == std::string::npos) return false;
        i += 2;
    }
    while (i < doc.size()) {
        if (doc[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t end = doc.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = doc.substr(i + 1, end - i - 1);
        // Quotes must pair up inside the tag.
        if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
        if (!tag.empty() && tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            if (stack.empty()) ++roots;
        } else if (!tag.empty() && tag.back() == '/') {
            if (stack.empty()) ++roots;
        } else {
            const std::size_t space = tag.find_first_of(" \t\n");
            stack.push_back(space == std::string::npos ? tag
                                                       : tag.substr(0, space));
        }
        i = end + 1;
    }
    return stack.empty() && roots == 1;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("accounted steps are real steps times the trace budget") {
    a0c::Config cfg = small_config();
    cfg.repetitions = 1;
    cfg.n_trace = 1;
    cfg.horizon = 300;
    cfg.budget_accounted_steps = 300;  // exactly one full episode
    const a0c::ExperimentResult result = a0c::run_experiment(cfg);
    REQUIRE(result.repetitions.size() == 1);
    REQUIRE(result.repetitions[0].records.size() == 1);
    const a0c::RunRecord& rec = result.repetitions[0].records[0];
    CHECK(rec.real_steps == 300);
    CHECK(rec.accounted_steps == 300);
    CHECK(rec.episode_return < 0.0);
    CHECK(rec.wall_s == 0.0);
}

TEST_CASE("every record satisfies the step accounting identity") {
    const a0c::ExperimentResult result = a0c::run_experiment(small_config());
    for (const auto& rep : result.repetitions) {
        CHECK(!rep.aborted);
        for (const a0c::RunRecord& rec : rep.records) {
            CHECK(rec.accounted_steps == rec.real_steps * 2);
            CHECK(rec.real_steps == 40);
        }
    }
}

TEST_CASE("budget is exceeded by at most one episode") {
    a0c::Config cfg = small_config();
    cfg.repetitions = 1;
    cfg.budget_accounted_steps = 150;  // one episode is 80 accounted steps
    const a0c::ExperimentResult result = a0c::run_experiment(cfg);
    long total = 0;
    for (const a0c::RunRecord& rec : result.repetitions[0].records) {
        total += rec.accounted_steps;
    }
    CHECK(total >= cfg.budget_accounted_steps);
    CHECK(total < cfg.budget_accounted_steps + 80);
    CHECK(result.repetitions[0].records.size() == 2);
}

TEST_CASE("identical config and seed give byte-identical CSV output") {
    const a0c::Config cfg = small_config();
    const std::string a = a0c::csv_string(a0c::flatten(a0c::run_experiment(cfg)));
    const std::string b = a0c::csv_string(a0c::flatten(a0c::run_experiment(cfg)));
    CHECK(a == b);
    CHECK(!a.empty());

    a0c::Config other = cfg;
    other.seed = 12;
    const std::string c =
        a0c::csv_string(a0c::flatten(a0c::run_experiment(other)));
    CHECK(a != c);
}

TEST_CASE("CSV columns are exactly the documented order") {
    a0c::RunRecord rec;
    rec.repetition = 1;
    rec.episode = 2;
    rec.real_steps = 300;
    rec.accounted_steps = 3000;
    rec.episode_return = -1.25;
    rec.policy_loss = 0.5;
    rec.entropy = -0.125;
    rec.value_loss = 0.03125;
    rec.wall_s = 0.0;
    const std::string body = a0c::csv_string({rec});
    CHECK(body ==
          "rep,episode,real_steps,accounted_steps,return,policy_loss,entropy,"
          "value_loss,wall_s\n"
          "1,2,300,3000,-1.25,0.5,-0.125,0.03125,0\n");
}

TEST_CASE("emitted CSV round-trips exactly") {
    const a0c::ExperimentResult result = a0c::run_experiment(small_config());
    const std::vector<a0c::RunRecord> records = a0c::flatten(result);
    const std::string path = temp_path("a0c_roundtrip.csv");
    a0c::emit_csv(records, path);
    const std::vector<a0c::RunRecord> parsed = a0c::read_csv(path);
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].repetition == records[i].repetition);
        CHECK(parsed[i].episode == records[i].episode);
        CHECK(parsed[i].real_steps == records[i].real_steps);
        CHECK(parsed[i].accounted_steps == records[i].accounted_steps);
        CHECK(parsed[i].episode_return == records[i].episode_return);
        CHECK(parsed[i].policy_loss == records[i].policy_loss);
        CHECK(parsed[i].entropy == records[i].entropy);
        CHECK(parsed[i].value_loss == records[i].value_loss);
    }
    std::filesystem::remove(path);
}

TEST_CASE("CSV writer and reader reject bad inputs") {
    CHECK_THROWS_AS(a0c::emit_csv({}, temp_path("a0c_x.csv")),
                    std::invalid_argument);
    a0c::RunRecord rec;
    CHECK_THROWS_AS(a0c::emit_csv({rec}, "/nonexistent/dir/a0c.csv"),
                    std::runtime_error);

    const std::string bad = temp_path("a0c_bad_header.csv");
    {
        std::ofstream os(bad);
        os << "rep,episode\n1,2\n";
    }
    CHECK_THROWS_AS(a0c::read_csv(bad), std::runtime_error);
    std::filesystem::remove(bad);
}

TEST_CASE("trailing mean smooths over a 10-episode window") {
    std::vector<double> xs;
    for (int i = 1; i <= 25; ++i) xs.push_back(static_cast<double>(i));
    const std::vector<double> smooth = a0c::trailing_mean(xs, 10);
    CHECK(smooth[0] == 1.0);
    CHECK(smooth[1] == doctest::Approx(1.5));
    CHECK(smooth[9] == doctest::Approx(5.5));   // mean of 1..10
    CHECK(smooth[24] == doctest::Approx(20.5));  // mean of 16..25
}

TEST_CASE("quartile means cover the first and last quarter") {
    std::vector<a0c::RunRecord> records(8);
    for (int i = 0; i < 8; ++i) {
        records[i].episode = i;
        records[i].episode_return = static_cast<double>(i);
    }
    // Trailing-10 window over 8 points is the running mean.
    CHECK(a0c::first_quartile_mean(records) ==
          doctest::Approx(0.25));  // mean of smoothed[0..1] = (0 + 0.5)/2
    const double last = a0c::final_quartile_mean(records);
    CHECK(last > a0c::first_quartile_mean(records));
}

TEST_CASE("plot emits well-formed SVG with one legend entry per CSV") {
    a0c::Config cfg = small_config();
    const std::string csv_a = temp_path("a0c_plot_a.csv");
    a0c::emit_csv(a0c::flatten(a0c::run_experiment(cfg)), csv_a);

    cfg.n_trace = 4;
    cfg.budget_accounted_steps = 320;
    const std::string csv_b = temp_path("a0c_plot_b.csv");
    a0c::emit_csv(a0c::flatten(a0c::run_experiment(cfg)), csv_b);

    const std::string svg = a0c::plot_svg({csv_a, csv_b});
    CHECK(xml_well_formed(svg));
    std::size_t legend_entries = 0;
    for (std::size_t pos = svg.find("N_trace="); pos != std::string::npos;
         pos = svg.find("N_trace=", pos + 1)) {
        ++legend_entries;
    }
    CHECK(legend_entries == 2);
    CHECK(svg.find("polyline") != std::string::npos);

    const std::string out = temp_path("a0c_plot.svg");
    a0c::emit_plot({csv_a, csv_b}, out);
    CHECK(std::filesystem::exists(out));

    std::filesystem::remove(csv_a);
    std::filesystem::remove(csv_b);
    std::filesystem::remove(out);
}

TEST_CASE("single-point series renders as a marker without a polyline") {
    a0c::Config cfg = small_config();
    cfg.repetitions = 1;
    cfg.budget_accounted_steps = 80;  // exactly one episode
    const std::string csv = temp_path("a0c_plot_single.csv");
    a0c::emit_csv(a0c::flatten(a0c::run_experiment(cfg)), csv);

    const std::string svg = a0c::plot_svg({csv});
    CHECK(xml_well_formed(svg));
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    std::filesystem::remove(csv);
}

TEST_CASE("plot requires at least one input") {
    CHECK_THROWS_AS(a0c::plot_svg({}), std::invalid_argument);
}

}  // TEST_SUITE
