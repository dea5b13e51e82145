#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

#include "eaesc/scenario.hpp"

using namespace eaesc;
using namespace eaesc::cli;

namespace {

std::string schema_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.what();
    }
    return "";
}

std::string space_error(const std::string& text) {
    return schema_message([&] { parse_space(parse_text(text, "t.json")); });
}

std::string op_error(const std::string& text) {
    return schema_message([&] { run_json(parse_text(text, "t.json"), Flags{}); });
}

const char* kShiftScenario = R"json({
  "kind": "operator", "name": "t",
  "shapes": {"S": ["Seq"]},
  "operators": {"u": {"dom": "S", "blocks": [[{"shift": -1}]]},
                "v": {"dom": "S", "blocks": [[{"symbol": [[-1, "2"]], "correction": [[1, 3, "1/2"]]}]]}},
  "program": [
    {"op": "witness_from_complemented", "r": "u", "z": [], "as": "w"},
    {"op": "sc_construct", "w": "w", "u": "u", "v": "v", "as": "c"},
    {"op": "sc_verify", "u": "u", "v": "v", "couple": "c", "as": "ok"}
  ],
  "expectations": [{"claim": "ok", "expected": true}]
})json";

// Every object carrying a "value" also carries a tag.
bool all_tagged(const Json& j) {
    if (j.is_object()) {
        if (j.contains("value") && !(j.contains("tag") && (j["tag"] == "exact" || j["tag"] == "non-certified")))
            return false;
        for (const auto& [k, v] : j.items())
            if (!all_tagged(v)) return false;
    } else if (j.is_array()) {
        for (const auto& v : j)
            if (!all_tagged(v)) return false;
    }
    return true;
}

int shell(const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("JSON syntax errors report line and column") {
    std::string m = schema_message([] { parse_text("{\n  \"kind\": \"space\",\n  \"atoms\": [1,,]\n}", "f.json"); });
    CHECK(m.rfind("f.json:3:", 0) == 0);
    CHECK(schema_message([] { parse_text("{}", "f.json"); }).empty());
}

TEST_CASE("space schema errors carry JSON pointers") {
    CHECK(space_error(R"j({"kind":"space","pairs":[["a","a"]]})j").find("missing field \"atoms\"") != std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a","iphi":"x"}],"pairs":[["a","a"]]})j").find("/atoms/0/iphi") !=
          std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a"},{"name":"a"}],"pairs":[["a","a"]]})j").find("duplicate") !=
          std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a"}],"pairs":[["a","a + b"]]})j").find("/pairs/0/1") != std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a"},{"name":"b"}],"relations":[["a","b","Friendly"]],"pairs":[["a","b"]]})j")
              .find("/relations/0/2") != std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a"}],"pairs":[["a","a"]],"expectations":[{"claim":"verdict","expected":"x"}]})j")
              .find("need \"k\"") != std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a"}],"pairs":[["a","a"]],"expectations":[{"claim":"eae","pair":3,"expected":1}]})j")
              .find("/expectations/0/pair") != std::string::npos);
    // iso atoms with different declared I_Phi
    CHECK(space_error(R"j({"atoms":[{"name":"a","iphi":1},{"name":"b","iphi":2}],"relations":[["a","b","Isomorphic"]],"pairs":[["a","b"]]})j")
              .find("InconsistentFacts") != std::string::npos);
    CHECK(space_error(R"j({"atoms":[{"name":"a","iphi":null,"flags":{"finite_dim":3}}],"pairs":[["a","a (+) a"]]})j").empty());
}

TEST_CASE("operator schema errors carry JSON pointers") {
    CHECK(op_error(R"j({"kind":"operator","shapes":{"S":["Fin(0)"]},"program":[]})j").find("/shapes/S/0") !=
          std::string::npos);
    CHECK(op_error(R"j({"kind":"operator","shapes":{"S":["Seq"]},"operators":{"u":{"dom":"S","blocks":[[null,null]]}},"program":[]})j")
              .find("/operators/u/blocks/0") != std::string::npos);
    CHECK(op_error(R"j({"kind":"operator","operators":{"u":{"dom":["Seq"],"blocks":[[{"symbol":[[0,"1/0"]]}]]}},"program":[]})j")
              .find("/operators/u/blocks/0/0/symbol/0/1") != std::string::npos);
    // symbol on a finite factor
    CHECK(op_error(R"j({"kind":"operator","operators":{"u":{"dom":["Fin(2)"],"blocks":[[{"shift":0}]]}},"program":[]})j")
              .find("ShapeMismatch") != std::string::npos);
    CHECK(op_error(R"j({"kind":"operator","program":[{"op":"frobnicate"}]})j").find("/program/0/op") != std::string::npos);
    CHECK(op_error(R"j({"kind":"operator","program":[{"op":"index","of":"u"}]})j").find("/program/0/of") !=
          std::string::npos);
    CHECK(op_error(R"j({"kind":"operator","operators":{"u":{"dom":["Seq"],"blocks":[[null]]}},"program":[{"op":"index","of":"u","as":"i"}],"expectations":[{"claim":"j.value","expected":0}]})j")
              .find("/expectations/0/claim") != std::string::npos);
    CHECK(op_error(R"j({"kind":"magic"})j").find("/kind") != std::string::npos);
    CHECK(op_error(kShiftScenario).empty());
}

TEST_CASE("file runs map failures to exit codes") {
    auto dir = std::filesystem::temp_directory_path() / "eaesc_cli_test";
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream((dir / name).string()) << text;
        return (dir / name).string();
    };
    CHECK(run_file(write("ok.json", kShiftScenario), Flags{}).exit_code == 0);
    CHECK(run_file(write("syntax.json", "{\"kind\": }"), Flags{}).exit_code == 2);
    CHECK(run_file((dir / "missing.json").string(), Flags{}).exit_code == 2);

    // failing expectation
    std::string wrong = kShiftScenario;
    wrong.replace(wrong.find("\"expected\": true"), 16, "\"expected\": false");
    Report r = run_file(write("wrong.json", wrong), Flags{});
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.pass);

    // index 1 against index 0: sc_construct must refuse, exit 3 naming it
    std::string mismatch = kShiftScenario;
    mismatch.replace(mismatch.find("[[-1, \"2\"]]"), 11, "[[0, \"2\"]]");
    r = run_file(write("mismatch.json", mismatch), Flags{});
    CHECK(r.exit_code == 3);
    CHECK(r.json["error"]["op"] == "sc_construct");
    CHECK(r.text.find("sc_construct") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("builtin runs pass and carry the reference values") {
    auto names = list_scenarios();
    for (const char* n : {"lp-lq", "improj-k0", "james-triple", "gm-hyperplane", "op-shift-complemented"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    for (const auto& n : names) {
        Report r = run_builtin(n, Flags{});
        INFO(n);
        CHECK(r.exit_code == 0);
        CHECK(r.pass);
        CHECK(all_tagged(r.json["computed"]));
        for (const char* f : {"inputs", "computed", "verdicts", "rule_trail", "expectations", "pass"})
            CHECK(r.json.contains(f));
    }
    Report lp = run_builtin("lp-lq", Flags{});
    const Json& p = lp.json["computed"]["pairs"][0];
    CHECK(p["eae"]["value"] == 1);
    CHECK(p["sc"]["value"] == 0);
    for (const auto& v : lp.json["verdicts"])
        CHECK(v["verdict"] == (v["k"] == 0 ? "EqualNonempty" : "StrictlyContained"));
    CHECK(p["realizations"].size() == 1);
    CHECK(p["realizations"][0]["sc_verify"]["value"] == true);

    Report op = run_builtin("op-shift-complemented", Flags{});
    CHECK(op.json["computed"]["ok"]["value"] == true);
    CHECK(run_builtin("no-such", Flags{}).exit_code == 1);
}

TEST_CASE("remark 5.6 step structure") {
    auto steps = [](const std::string& n) { return run_builtin(n, Flags{}).json["computed"]["pairs"][0]["remark_5_6"]; };
    Json gm = steps("gm-hyperplane");  // eae = 0: finish after one step
    REQUIRE(gm.size() == 2);
    CHECK(gm[0]["result"]["value"] == 0);
    Json im = steps("improj-k0");  // eae = 1, 1 not in I_SC = 3Z
    REQUIRE(im.size() == 3);
    CHECK(im[1]["result"]["value"] == false);
    Json eq = steps("improj-equal");  // eae = 3 = sc
    REQUIRE(eq.size() == 3);
    CHECK(eq[1]["result"]["value"] == true);
    Json gap = steps("open-gap");
    CHECK(gap.back()["rule"] == "Question 5.10");
}

TEST_CASE("exported builtins round-trip through the parser") {
    for (const auto& s : space::builtin_scenarios()) {
        INFO(s.name);
        Json exported = space_to_json(s);
        Report direct = run_space(s, Flags{});
        Report parsed = run_json(parse_text(exported.dump(), s.name), Flags{});
        CHECK(direct.json.dump() == parsed.json.dump());
    }
}

TEST_CASE("describe") {
    auto d = describe("sc_construct");
    REQUIRE(d);
    CHECK(d->find("Thm 4.1") != std::string::npos);
    CHECK(describe("eae_check")->find("Thm 1.3(ii)") != std::string::npos);
    CHECK(describe("witness_power")->find("Lemma 5.1(iii)") != std::string::npos);
    CHECK_FALSE(describe("nonexistent"));
}

TEST_CASE("reports are deterministic") {
    Flags f;
    for (const char* n : {"james-triple", "beyond-proj", "op-block-fin"}) {
        CHECK(run_builtin(n, f).json.dump() == run_builtin(n, f).json.dump());
        CHECK(run_builtin(n, f).text == run_builtin(n, f).text);
    }
}

TEST_CASE("command line exit codes") {
    std::string bin = EAESC_CLI_PATH;
    auto dir = std::filesystem::temp_directory_path() / "eaesc_cli_bin_test";
    std::filesystem::create_directories(dir);
    std::string bad = (dir / "bad.json").string();
    std::ofstream(bad) << "{ \"kind\": \"space\", ";
    CHECK(shell(bin + " list") == 0);
    CHECK(shell(bin + " describe sc_construct") == 0);
    CHECK(shell(bin + " describe nonexistent") == 1);
    CHECK(shell(bin + " run --builtin lp-lq") == 0);
    CHECK(shell(bin + " run " + bad) == 2);
    CHECK(shell(bin + " run --builtin lp-lq --numeric-tolerance x/y") == 2);

    std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    CHECK(shell(bin + " run --builtin all --json " + a) == 0);
    CHECK(shell(bin + " run --builtin all --parallel --json " + b) == 0);
    std::ifstream fa(a), fb(b);
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(!sa.empty());
    CHECK(sa == sb);
    std::filesystem::remove_all(dir);
}
