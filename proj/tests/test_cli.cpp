#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wshift/cli.hpp"

using namespace wshift;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wshift_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, FamiliesList) {
  const auto r = run({"families", "list"});
  EXPECT_EQ(r.code, 0);
  for (const char* f : {"thm-compactper", "example-bergman", "exof1atom", "thm-important", "stair", "thm-khypo", "adhoc"})
    EXPECT_NE(r.out.find(f), std::string::npos) << f;
}

TEST(Cli, SpectrumJsonHasPointPrimitive) {
  const auto r = run({"spectrum", "--family", "thm-khypo", "--kappa", "2", "--emit", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(R"({"z1":{"kind":"point","r":1.414214},"z2":{"kind":"point","r":0}})"), std::string::npos);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["components"]["sigma_Te"], 2);
}

TEST(Cli, SpectrumRoundTripsThroughLoader) {
  const auto r = run({"spectrum", "--family", "thm-important", "--ells", "4,3,2", "--c", "1", "--emit", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  // Six-decimal output: compare primitive by primitive at that resolution.
  const auto te = json_io::picture_from_json(j["pictures"][1]).normal_form();
  const auto want = picture_thm_important({4, 3, 2}, 1.0).essential().normal_form();
  EXPECT_EQ(te.label(), want.label());
  ASSERT_EQ(te.primitives().size(), want.primitives().size());
  for (std::size_t i = 0; i < te.primitives().size(); ++i) {
    EXPECT_EQ(te.primitives()[i].z1.kind, want.primitives()[i].z1.kind);
    EXPECT_NEAR(te.primitives()[i].z1.hi(), want.primitives()[i].z1.hi(), 1e-6);
    EXPECT_NEAR(te.primitives()[i].z2.hi(), want.primitives()[i].z2.hi(), 1e-6);
  }
  EXPECT_EQ(j["components"]["sigma_Te"], 4);
}

TEST(Cli, CheckKhypoPasses) {
  const auto r = run({"check", "khypo", "--family", "thm-khypo", "--kappa", "2", "--y0", "0.707106", "--k", "3", "--region", "10"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["status"], "PASS_ON_REGION");
}

TEST(Cli, CheckHypoFailsWithWitness) {
  const auto r = run({"check", "hypo", "--family", "exof1atom", "--alpha", "0.5", "--beta", "0.8", "--region", "10"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "FAIL");
  ASSERT_TRUE(j.contains("witness"));
  EXPECT_LT(j["witness"]["lambda_min"].get<double>(), -1e-6);
}

TEST(Cli, ExitCodeMatrix) {
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases{
      {{"check", "hypo", "--family", "example-bergman", "--region", "8"}, 0},
      {{"check", "hypo", "--family", "stair", "--a", "0.5", "--region", "8"}, 1},
      {{"check", "khypo", "--family", "thm-khypo", "--y0", "0.8", "--k", "2", "--region", "5"}, 1},
      {{"check", "subnec", "--family", "example-bergman", "--region", "6"}, 0},
      {{"check", "subnec", "--family", "adhoc", "--rows",
        R"([{"label":"r0","weights":{"head":[],"tail":{"kind":"two_atom","kappa":9}}},{"label":"r1","weights":{"head":[],"tail":{"kind":"constant","value":1}}},{"label":"r2","weights":{"head":[],"tail":{"kind":"bergman_like","ell":4,"offset":0}}}])",
        "--col0", R"({"label":"c","weights":{"head":[0.5],"tail":{"kind":"constant","value":1}}})", "--region", "4"},
       1},
      {{"spectrum", "--family", "stair"}, 1},
      {{"spectrum", "--family", "example-bergman", "--emit", "text"}, 0},
      {{"spectrum", "--family", "thm-khypo", "--emit", "bmp"}, 2},
      {{"check", "hypo", "--family", "thm-khypo", "--region", "4", "--bogus", "1"}, 2},
      {{"check", "hypo", "--family", "nosuch", "--region", "4"}, 2},
      {{"check", "hypo", "--family", "thm-khypo"}, 2},
      {{"check", "maybe", "--family", "thm-khypo", "--region", "3"}, 2},
      {{"check", "hypo", "--family", "exof1atom", "--alpha", "0.9", "--beta", "0.5", "--region", "3"}, 2},
      {{"diagram", "show", "--family", "stair", "--region", "3"}, 0},
      {{"diagram", "show", "--diagram", "{not json"}, 2},
      {{"moments", "--family", "thm-khypo", "--m1", "2", "--m2", "0"}, 0},
      {{"oracle", "compare", "--suite", "sections"}, 0},
      {{"oracle", "compare", "--suite", "bogus"}, 2},
      {{}, 2},
      {{"frobnicate"}, 2},
      {{"--help"}, 0},
  };
  for (const auto& c : cases) {
    const auto r = run(c.args);
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    EXPECT_EQ(r.code, c.code) << joined << "\n" << r.err;
    if (c.code == 2) {
      EXPECT_FALSE(r.err.empty()) << joined;
    }
  }
}

TEST(Cli, UsageErrorPrintsUsage) {
  const auto r = run({"check", "hypo", "--family", "thm-khypo", "--region", "3", "--nope"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MomentsMatchLibrary) {
  const auto r = run({"moments", "--family", "thm-khypo", "--kappa", "2", "--y0", "0.7", "--m1", "2", "--m2", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["gamma"].get<double>(), 2.5);
  const auto m = run({"moments", "--measure", R"({"atoms":[{"s":1,"mass":0.5},{"s":2,"mass":0.5}]})", "--n", "3"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(json::parse(m.out)["moments"], json::parse("[1,1.5,2.5,4.5]"));
  const auto d = run({"moments", "--measure", R"({"density":"bergman2"})", "--n", "2"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_DOUBLE_EQ(json::parse(d.out)["moments"][2].get<double>(), 2.5);
}

TEST(Cli, DiagramJsonRoundTrip) {
  std::vector<std::vector<std::string>> invocations{
      {"--family", "example-bergman"},
      {"--family", "exof1atom", "--alpha", "0.4", "--beta", "0.9"},
      {"--family", "thm-important", "--ells", "5,3,2", "--c", "0.8", "--r", "0.9"},
      {"--family", "stair", "--a", "0.3"},
      {"--family", "thm-khypo", "--kappa", "3", "--y0", "0.6"},
      {"--family", "thm-compactper", "--row0", R"({"label":"W","weights":{"head":[],"tail":{"kind":"two_atom","kappa":3}}})",
       "--row1", R"({"label":"U","weights":{"head":[],"tail":{"kind":"constant","value":1}}})", "--col0",
       R"({"label":"c","weights":{"head":[0.5],"tail":{"kind":"constant","value":1}}})"},
  };
  for (const auto& inv : invocations) {
    std::vector<std::string> args{"diagram", "show", "--emit", "json", "--region", "3"};
    args.insert(args.end(), inv.begin(), inv.end());
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto loaded = json_io::diagram_from_json(json::parse(r.out));
    const auto direct = cli::detail::build_diagram([&] {
      cli::FamilyOptions o;
      CLI::App app;
      o.attach(&app);
      std::vector<std::string> rev(inv.rbegin(), inv.rend());
      app.parse(rev);
      return o;
    }());
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        EXPECT_NEAR(loaded.alpha(i, j), direct.alpha(i, j), 1e-12) << inv[1];
        EXPECT_NEAR(loaded.beta(i, j), direct.beta(i, j), 1e-12) << inv[1];
      }
    // Feeding the JSON back through --diagram reproduces the same output.
    const auto again = run({"diagram", "show", "--emit", "json", "--region", "3", "--diagram", r.out});
    EXPECT_EQ(again.out, r.out);
  }
}

TEST(Cli, DiagramFromFile) {
  const auto dir = scratch("file");
  std::filesystem::create_directories(dir);
  const auto path = dir / "d.json";
  std::ofstream(path) << run({"diagram", "show", "--family", "thm-khypo", "--emit", "json"}).out;
  const auto r = run({"check", "hypo", "--diagram", "@" + path.string(), "--region", "6", "--emit", "text"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"check", "hypo", "--diagram", "@" + (dir / "missing.json").string(), "--region", "6"}).code, 2);
}

TEST(Cli, TextTableLayout) {
  const auto r = run({"diagram", "show", "--family", "stair", "--a", "0.5", "--region", "2"});
  ASSERT_EQ(r.code, 0);
  // Top row first, row 0 last; alpha(i, j) = a for i < j.
  const auto top = r.out.find("j=2: 0.500000 0.500000 1.000000");
  const auto bottom = r.out.find("j=0: 1.000000 1.000000 1.000000");
  ASSERT_NE(top, std::string::npos);
  ASSERT_NE(bottom, std::string::npos);
  EXPECT_LT(top, bottom);
}

TEST(Cli, ConfigFileWithFlagPrecedence) {
  const auto dir = scratch("config");
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "c.json";
  std::ofstream(cfg) << R"({"family":"thm-khypo","kappa":2,"y0":0.707106,"k":3})";
  EXPECT_EQ(run({"check", "khypo", "--config", cfg.string(), "--region", "10"}).code, 0);
  EXPECT_EQ(run({"check", "khypo", "--config", cfg.string(), "--y0", "0.8", "--region", "10"}).code, 1);
  EXPECT_EQ(run({"check", "khypo", "--config", (dir / "none.json").string(), "--region", "10"}).code, 2);
}

TEST(Cli, OracleCompareReport) {
  const auto r = run({"oracle", "compare", "--suite", "gamma"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 7u);
}

TEST(Cli, FiguresAreDeterministic) {
  const auto a = scratch("fig_a"), b = scratch("fig_b");
  ASSERT_EQ(run({"figures", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"figures", "--out", b.string()}).code, 0);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_EQ(files, 9u);
  const std::string imp = slurp(a / "fig2_thm_important.svg");
  std::size_t dots = 0;
  for (auto p = imp.find("class=\"dot\""); p != std::string::npos; p = imp.find("class=\"dot\"", p + 1)) ++dots;
  EXPECT_EQ(dots, 3u);
  const std::string ex = slurp(a / "fig2_exof1atom.svg");
  std::size_t members = 0;
  for (auto p = ex.find("family-member z1"); p != std::string::npos; p = ex.find("family-member z1", p + 1)) ++members;
  EXPECT_EQ(members, 12u);
  EXPECT_NE(ex.find("accumulation z1"), std::string::npos);
}

TEST(Cli, FiguresUnwritableDirectory) {
  const auto dir = scratch("blocker");
  std::ofstream(dir) << "file, not a directory";
  EXPECT_EQ(run({"figures", "--out", (dir / "sub").string()}).code, 2);
}

#ifdef WSHIFT_TOOL
TEST(Cli, ExecutableForwardsExitCodes) {
  const std::string tool = WSHIFT_TOOL;
  auto status = [&](const std::string& args) {
    const int s = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("families list"), 0);
  EXPECT_EQ(status("check hypo --family exof1atom --alpha 0.5 --beta 0.8 --region 10"), 1);
  EXPECT_EQ(status("check hypo --family exof1atom --unknown-flag"), 2);
}
#endif
