#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mwd/certificate.hpp"
#include "mwd/cli.hpp"
#include "support.hpp"

using namespace mwd;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mwd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / ("mwd_cli_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string k4_json() { return graph_to_json(DanglingGraph(complete_graph(4))).dump(); }

/// First compose node of a decomposition, depth first.
Json* first_compose(Json& d) {
  if (d.contains("compose")) return &d["compose"];
  if (d.contains("tensor")) {
    if (Json* c = first_compose(d["tensor"][0])) return c;
    return first_compose(d["tensor"][1]);
  }
  return nullptr;
}

}  // namespace

TEST_CASE("rankwidth certificate round trip") {
  Scratch s;
  std::string graph = s.write("k4.json", k4_json());
  Result r = run({"rankwidth", "--in", graph});
  REQUIRE(r.code == cli::ok);
  Json cert = Json::parse(r.out);
  CHECK(cert["kind"] == certificate::rank_kind);
  CHECK(cert["width"] == 1);

  std::string path = s.write("cert.json", r.out);
  CHECK(run({"verify", "--in", path}).code == cli::ok);
  CHECK(run({"verify", "--in", path, "--against", graph}).code == cli::ok);

  Result text = run({"rankwidth", "--in", graph, "--format", "text"});
  CHECK(text.out.rfind("1\n", 0) == 0);
  CHECK(run({"rankwidth", "--in", graph, "--format", "dot"}).out.find("graph") != std::string::npos);

  // mutated certificates are rejected
  Json wrong_width = cert;
  wrong_width["width"] = 2;
  Result bad = run({"verify", "--in", s.write("w.json", wrong_width.dump())});
  CHECK(bad.code == cli::verification_failed);
  CHECK_FALSE(bad.err.empty());
  Json broken_tree = cert;
  broken_tree["tree"]["edges"].erase(0);
  CHECK(run({"verify", "--in", s.write("t.json", broken_tree.dump())}).code ==
        cli::verification_failed);
  std::string other = s.write("c5.json", graph_to_json(DanglingGraph(cycle_graph(4))).dump());
  CHECK(run({"verify", "--in", path, "--against", other}).code == cli::verification_failed);
}

TEST_CASE("matrix certificates") {
  Scratch s;
  std::string m = s.write("m.json", "[[1, 0], [1, 2], [0, 0]]");
  Result r = run({"mwd-matrix", "--field", "rational", "--in", m});
  REQUIRE(r.code == cli::ok);
  Json cert = Json::parse(r.out);
  CHECK(cert["width"] == 3);
  CHECK(cert["report"]["factor_ranks"] == Json::array({2, 0}));
  CHECK(cert["report"]["lower"] == 2);
  CHECK(cert["report"]["upper"] == 3);
  std::string path = s.write("cert.json", r.out);
  CHECK(run({"verify", "--in", path}).code == cli::ok);
  CHECK(run({"verify", "--in", path, "--against", m}).code == cli::ok);

  Json tampered = cert;
  Json* c = first_compose(tampered["decomposition"]);
  REQUIRE(c != nullptr);
  (*c)["cut"] = (*c)["cut"].get<std::size_t>() + 1;
  Result bad = run({"verify", "--in", s.write("bad.json", tampered.dump())});
  CHECK(bad.code != cli::ok);
  CHECK(bad.code == cli::verification_failed);

  std::string other = s.write("other.json", "[[1, 0], [1, 1], [0, 0]]");
  CHECK(run({"verify", "--in", path, "--against", other}).code == cli::verification_failed);
}

TEST_CASE("every solver output passes verify") {
  Scratch s;
  support::Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = static_cast<std::size_t>(support::draw(rng, 1, 7));
    DanglingGraph g = support::random_dangling(rng, n, static_cast<std::size_t>(support::draw(rng, 0, 2)));
    std::string with_ports = s.write("g.json", graph_to_json(g).dump());
    std::string closed = s.write("h.json", graph_to_json(DanglingGraph(g.adjacency)).dump());
    for (auto [cmd, in] : {std::pair{"rankwidth", with_ports}, std::pair{"rrwd", with_ports},
                           std::pair{"mwd-graph", closed}}) {
      Result r = run({cmd, "--in", in});
      REQUIRE(r.code == cli::ok);
      std::string cert = s.write("cert.json", r.out);
      CHECK_MESSAGE(run({"verify", "--in", cert, "--against", in}).code == cli::ok, cmd);
      for (const char* to : {"rank", "recursive", "monoidal"}) {
        Result conv = run({"convert", "--to", to, "--in", cert});
        REQUIRE(conv.code == cli::ok);
        std::string converted = s.write("conv.json", conv.out);
        CHECK_MESSAGE(run({"verify", "--in", converted}).code == cli::ok, cmd << " -> " << to);
      }
    }

    Matrix f = support::random_matrix(rng, Field::gf2, support::draw(rng, 0, 5), support::draw(rng, 0, 5));
    std::string m = s.write("m.json", matrix_to_json(f).dump());
    Result r = run({"mwd-matrix", "--in", m});
    REQUIRE(r.code == cli::ok);
    CHECK(run({"verify", "--in", s.write("cert.json", r.out), "--against", m}).code == cli::ok);
  }
  // Rational certificates pass whenever they stay inside the generators, and
  // are rejected otherwise.
  for (int trial = 0; trial < 25; ++trial) {
    Matrix f = support::random_matrix(rng, Field::rational, support::draw(rng, 1, 4),
                                      support::draw(rng, 1, 4));
    std::string m = s.write("m.json", matrix_to_json(f).dump());
    Result r = run({"mwd-matrix", "--field", "rational", "--in", m});
    REQUIRE(r.code == cli::ok);
    Json cert = Json::parse(r.out);
    int code = run({"verify", "--in", s.write("cert.json", r.out)}).code;
    if (cert["report"]["non_generator_leaves"] == 0) {
      CHECK(code == cli::ok);
    } else {
      CHECK(code == cli::verification_failed);
    }
  }
}

TEST_CASE("deterministic output") {
  Scratch s;
  for (const char* kind : {"graph", "matrix"}) {
    Result a = run({"random", "--kind", kind, "--seed", "7", "--ports", "2"});
    Result b = run({"random", "--kind", kind, "--seed", "7", "--ports", "2"});
    Result c = run({"random", "--kind", kind, "--seed", "8", "--ports", "2"});
    REQUIRE(a.code == cli::ok);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    Json j = Json::parse(a.out);
    CHECK(j["seed"] == 7);
    CHECK(j["generator"] == "mt19937_64");
  }
  std::string g = s.write("g.json", run({"random", "--seed", "3", "--vertices", "7"}).out);
  for (const char* cmd : {"rankwidth", "rrwd", "mwd-graph"})
    CHECK(run({cmd, "--in", g}).out == run({cmd, "--in", g}).out);
  std::string m = s.write("m.json", run({"random", "--kind", "matrix", "--seed", "3"}).out);
  CHECK(run({"mwd-matrix", "--in", m}).out == run({"mwd-matrix", "--in", m}).out);

  // --out writes the same bytes to a file
  std::string target = s.path("out.json");
  CHECK(run({"rankwidth", "--in", g, "--out", target}).code == cli::ok);
  std::ifstream file(target);
  std::stringstream written;
  written << file.rdbuf();
  CHECK(written.str() == run({"rankwidth", "--in", g}).out);
}

TEST_CASE("JSON and text round trips") {
  Scratch s;
  support::Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    DanglingGraph g = support::random_dangling(rng, support::draw(rng, 0, 6), support::draw(rng, 0, 3));
    CHECK(graph_from_json(Json::parse(graph_to_json(g).dump()), Field::gf2) == g);
    CHECK(graph_from_text(graph_to_text(g), Field::gf2) == g);
    // text and JSON inputs give the same answer
    std::string as_json = s.write("g.json", graph_to_json(g).dump());
    std::string as_text = s.write("g.txt", graph_to_text(g));
    CHECK(run({"rrwd", "--in", as_json}).out == run({"rrwd", "--in", as_text}).out);
  }
  Result r = run({"rankwidth", "--in", s.write("k4.json", k4_json())});
  Json cert = Json::parse(r.out);
  Result again = run({"convert", "--to", "rank", "--in", s.write("c.json", r.out)});
  CHECK(Json::parse(again.out) == cert);
}

TEST_CASE("eval command") {
  Result r = run({"eval", "--field", "rational", "--expr", "(copy * (copy ; add)) ; (id * add * zero)"});
  REQUIRE(r.code == cli::ok);
  Json j = Json::parse(r.out);
  CHECK(matrix_from_json(j["value"]["matrix"], Field::rational, 2) ==
        Matrix::from_rows(Field::rational, {{1, 0}, {1, 2}, {0, 0}}));
  Result g = run({"eval", "--prop", "grph", "--expr", "cup ; (vertex * vertex)"});
  REQUIRE(g.code == cli::ok);
  CHECK(Json::parse(g.out)["value"]["k"] == 2);

  Result syntax = run({"eval", "--expr", "copy add"});
  CHECK(syntax.code == cli::usage);
  CHECK(syntax.err.find("column 6") != std::string::npos);
  CHECK(run({"eval", "--expr", "copy ; copy"}).code == cli::usage);
  CHECK(run({"eval", "--expr", "cup"}).code == cli::usage);
}

TEST_CASE("exit codes and errors") {
  Scratch s;
  CHECK(run({"--help"}).code == cli::ok);
  CHECK(run({}).code == cli::usage);
  CHECK(run({"rankwidth"}).code == cli::usage);
  CHECK(run({"rankwidth", "--in", s.path("missing.json")}).code == cli::usage);
  CHECK(run({"rankwidth", "--bogus"}).code == cli::usage);
  CHECK(run({"--field", "gf3", "rankwidth"}).code == cli::usage);
  CHECK(run({"rankwidth", "--in", s.write("bad.json", "{not json")}).code == cli::usage);

  std::string big = s.write("big.json", graph_to_json(DanglingGraph(complete_graph(13))).dump());
  Result capped = run({"rankwidth", "--error-json", "--in", big});
  CHECK(capped.code == cli::cap_refused);
  Json err = Json::parse(capped.err);
  CHECK(err["exit"] == cli::cap_refused);
  CHECK(err["error"].is_string());
  CHECK(run({"--max-vertices", "4", "rrwd", "--in", s.write("k5.json",
             graph_to_json(DanglingGraph(complete_graph(5))).dump())}).code == cli::cap_refused);

  std::string ported = s.write("p.json", graph_to_json(DanglingGraph(complete_graph(3),
                                                                     Matrix::identity(Field::gf2, 3))).dump());
  CHECK(run({"mwd-graph", "--in", ported}).code == cli::usage);
}
