#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pepca_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
  fs::path file(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// runs the CLI with stdout/stderr captured; returns the exit code
int run_cli(const std::string& args, const TempDir& dir, std::string* err_text = nullptr) {
  const fs::path out = dir.file("stdout.txt");
  const fs::path err = dir.file("stderr.txt");
  const std::string cmd = std::string(PEPCA_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  if (err_text != nullptr) *err_text = read_text(err);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

void write_fixture_embedding(const TempDir& dir) {
  write_text(dir.file("emb.csv"),
             "subject_id,pc1,pc2\n"
             "p1,0,0\n"
             "p2,0,2\n"
             "p3,10,0\n"
             "p4,10,2\n");
  write_text(dir.file("labels.csv"),
             "subject_id,label\n"
             "p1,left\n"
             "p2,left\n"
             "p3,right\n"
             "p4,right\n");
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  TempDir dir;
  CHECK(run_cli("", dir) == 1);
  CHECK(run_cli("--bogus-flag", dir) == 1);
  CHECK(run_cli("solve --no-such-option x", dir) == 1);
  CHECK(run_cli("frobnicate", dir) == 1);
  std::string err;
  CHECK(run_cli("solve", dir, &err) == 1);  // --similarity and --out-prefix required
  CHECK(!err.empty());
  CHECK(run_cli("--help", dir) == 0);
  CHECK(run_cli("solve --help", dir) == 0);
}

TEST_CASE("data errors exit 2 with a message on stderr") {
  TempDir dir;
  std::string err;
  CHECK(run_cli("solve --similarity " + dir.file("absent.csv").string() + " --out-prefix " +
                    dir.file("x").string(),
                dir, &err) == 2);
  CHECK(err.find("absent.csv") != std::string::npos);

  write_text(dir.file("bad.csv"), "subject_id,v1\na,0\nb,3\n");
  CHECK(run_cli("grm --genotypes " + dir.file("bad.csv").string() + " --out " +
                    dir.file("g.csv").string(),
                dir, &err) == 2);
  CHECK(err.find("line 3") != std::string::npos);
  CHECK(err.find("column 2") != std::string::npos);

  write_text(dir.file("rect.csv"), "1,2,3\n4,5,6\n");
  CHECK(run_cli("solve --similarity " + dir.file("rect.csv").string() + " --out-prefix " +
                    dir.file("y").string(),
                dir, &err) == 2);
  CHECK(err.find("not square") != std::string::npos);
}

TEST_CASE("grm subcommand reproduces the hand-computed example") {
  TempDir dir;
  write_text(dir.file("geno.csv"), "subject_id,v1\na,0\nb,2\n");
  REQUIRE(run_cli("grm --genotypes " + dir.file("geno.csv").string() + " --out " +
                      dir.file("grm.csv").string(),
                  dir) == 0);
  const std::string out = read_text(dir.file("grm.csv"));
  CHECK(out ==
        "id,a,b\n"
        "a,2,-2\n"
        "b,-2,2\n");
  const json manifest = json::parse(read_text(dir.file("grm.csv.manifest.json")));
  CHECK(manifest.at("command").get<std::string>() == "grm");
  CHECK(manifest.contains("version"));
}

TEST_CASE("solve on diag(3,1) emits the canonical leading vector") {
  TempDir dir;
  write_text(dir.file("q.csv"), "id,a,b\na,3,0\nb,0,1\n");
  REQUIRE(run_cli("solve --similarity " + dir.file("q.csv").string() +
                      " --lambda 0 --mu 0.1 --out-prefix " + dir.file("emb").string(),
                  dir) == 0);
  const fs::path out = dir.file("emb_lambda0.csv");
  REQUIRE(fs::exists(out));
  const std::string text = read_text(out);
  CHECK(text.rfind("subject_id,pc1,pc2\n", 0) == 0);

  // pc1 column must be (1, 0) up to solver tolerance
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  std::getline(lines, line);
  CHECK(line.rfind("a,", 0) == 0);
  const double a_pc1 = std::stod(line.substr(2, line.find(',', 2) - 2));
  std::getline(lines, line);
  const double b_pc1 = std::stod(line.substr(2, line.find(',', 2) - 2));
  CHECK(a_pc1 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(b_pc1) < 1e-6);

  const json meta = json::parse(read_text(dir.file("emb_lambda0.csv.meta.json")));
  CHECK(meta.at("lambda").get<double>() == 0.0);
  CHECK(meta.at("mu").get<double>() == 0.1);
  CHECK(meta.at("levels")[0].at("converged").get<bool>());
  CHECK(meta.at("levels")[0].at("rayleigh").get<double>() == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(meta.at("manifest").at("command").get<std::string>() == "solve");
}

TEST_CASE("solve writes one output per grid value in order") {
  TempDir dir;
  write_text(dir.file("q.csv"), "id,a,b\na,3,0\nb,0,1\n");
  REQUIRE(run_cli("solve --similarity " + dir.file("q.csv").string() +
                      " --lambda -1,0,1 --mu 0.1 --out-prefix " + dir.file("g").string(),
                  dir) == 0);
  CHECK(fs::exists(dir.file("g_lambda-1.csv")));
  CHECK(fs::exists(dir.file("g_lambda0.csv")));
  CHECK(fs::exists(dir.file("g_lambda1.csv")));

  std::string err;
  CHECK(run_cli("solve --similarity " + dir.file("q.csv").string() +
                    " --lambda 0,nope --out-prefix " + dir.file("h").string(),
                dir, &err) == 1);
}

TEST_CASE("metrics on the four-point fixture") {
  TempDir dir;
  write_fixture_embedding(dir);
  REQUIRE(run_cli("metrics --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("labels.csv").string() + " --out " + dir.file("m.json").string(),
                  dir) == 0);
  const json m = json::parse(read_text(dir.file("m.json")));
  CHECK(m.at("n").get<int>() == 4);
  CHECK(m.at("k").get<int>() == 2);
  CHECK(m.at("ss_within").get<double>() == 4.0);
  CHECK(m.at("ss_between").get<double>() == 100.0);
  CHECK(m.at("silhouette_mean").get<double>() == doctest::Approx(0.80196).epsilon(2e-5));

  SUBCASE("missing label exits 2") {
    write_text(dir.file("partial.csv"), "subject_id,label\np1,left\np2,left\np3,right\n");
    std::string err;
    CHECK(run_cli("metrics --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("partial.csv").string() + " --out " + dir.file("m2.json").string(),
                  dir, &err) == 2);
    CHECK(err.find("p4") != std::string::npos);
  }

  SUBCASE("single cluster exits 2") {
    write_text(dir.file("mono.csv"),
               "subject_id,label\np1,x\np2,x\np3,x\np4,x\n");
    CHECK(run_cli("metrics --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("mono.csv").string() + " --out " + dir.file("m3.json").string(),
                  dir) == 2);
  }
}

TEST_CASE("plot emits a deterministic structured SVG") {
  TempDir dir;
  write_fixture_embedding(dir);
  REQUIRE(run_cli("plot --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("labels.csv").string() + " --out " + dir.file("p.svg").string(),
                  dir) == 0);
  const std::string svg = read_text(dir.file("p.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count_occurrences(svg, "<circle") == 4);
  CHECK(count_occurrences(svg, "class=\"entry\"") == 2);
  CHECK(svg.find("left") != std::string::npos);
  CHECK(svg.find("right") != std::string::npos);

  // rerun into the same path: the desc block records the output location,
  // so determinism means identical bytes for identical invocations
  REQUIRE(run_cli("plot --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("labels.csv").string() + " --out " + dir.file("p.svg").string(),
                  dir) == 0);
  CHECK(read_text(dir.file("p.svg")) == svg);

  SUBCASE("missing label exits 2") {
    write_text(dir.file("partial.csv"), "subject_id,label\np1,left\np2,left\np3,right\n");
    CHECK(run_cli("plot --embedding " + dir.file("emb.csv").string() + " --labels " +
                      dir.file("partial.csv").string() + " --out " + dir.file("p3.svg").string(),
                  dir) == 2);
  }
}

TEST_CASE("synth to metrics pipeline round trip") {
  TempDir dir;
  REQUIRE(run_cli("synth --clusters 2x10 --separation 6 --noise 0.5 --seed 3 --out-prefix " +
                      dir.file("syn").string(),
                  dir) == 0);
  REQUIRE(fs::exists(dir.file("syn_similarity.csv")));
  REQUIRE(fs::exists(dir.file("syn_labels.csv")));
  REQUIRE(fs::exists(dir.file("syn.manifest.json")));

  REQUIRE(run_cli("solve --similarity " + dir.file("syn_similarity.csv").string() +
                      " --lambda 0 --mu 0.1 --out-prefix " + dir.file("emb").string(),
                  dir) == 0);
  REQUIRE(run_cli("metrics --embedding " + dir.file("emb_lambda0.csv").string() + " --labels " +
                      dir.file("syn_labels.csv").string() + " --out " + dir.file("m.json").string(),
                  dir) == 0);
  const json m = json::parse(read_text(dir.file("m.json")));
  CHECK(m.at("n").get<int>() == 20);
  CHECK(m.at("k").get<int>() == 2);
  CHECK(std::isfinite(m.at("ss_within").get<double>()));
  CHECK(std::isfinite(m.at("ss_between").get<double>()));
  CHECK(std::isfinite(m.at("silhouette_mean").get<double>()));
  // two tight clusters six apart separate cleanly in the top-2 embedding
  CHECK(m.at("silhouette_mean").get<double>() > 0.5);

  SUBCASE("cluster spec variants parse") {
    CHECK(run_cli("synth --clusters 3,4 --seed 1 --out-prefix " + dir.file("c").string(), dir) ==
          0);
    CHECK(run_cli("synth --clusters 0x5 --seed 1 --out-prefix " + dir.file("z").string(), dir) ==
          1);
    CHECK(run_cli("synth --clusters howdy --seed 1 --out-prefix " + dir.file("w").string(),
                  dir) == 1);
  }
}
