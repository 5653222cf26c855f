#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(FRACLAP_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path workdir() {
    const auto dir = fs::temp_directory_path() / "fraclap_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("matrix build writes a cache and a manifest") {
    const auto out = workdir() / "m128.bin";
    const auto a = cli("matrix build --n 128 --alpha 0.5 --L 1 --llim 210 --out " + out.string());
    REQUIRE(a.code == 0);
    CHECK(a.out.find("assembled N=128") != std::string::npos);
    CHECK(fs::file_size(out) == 64 + 256u * 256 * 16 + 4);
    const auto man = nlohmann::json::parse(slurp(out.string() + ".json"));
    CHECK(man["command"] == "matrix build");
    CHECK(man["parameters"]["grid"]["n"] == 128);

    const auto b = cli("matrix build --n 128 --alpha 0.5 --L 1 --llim 210 --workers 1 --out " + out.string());
    REQUIRE(b.code == 0);
    auto checksums = [](const std::string& text) { return text.substr(text.find("column 0")); };
    CHECK(checksums(a.out) == checksums(b.out));
}

TEST_CASE("range and value errors") {
    CHECK(cli("matrix build --n 16 --alpha 2.0 --out " + (workdir() / "x.bin").string()).code == 1);
    CHECK(cli("matrix build --n 15 --alpha 0.5 --out " + (workdir() / "x.bin").string()).code == 1);
    CHECK(cli("fisher --alpha 1.5 --n 16 --dt 0 --out-dir " + (workdir() / "f0").string()).code == 1);
    CHECK(cli("validate --target nonsense").code != 0);
}

TEST_CASE("validate exit codes") {
    const auto csv = workdir() / "v.csv";
    const auto ok = cli("validate --target mode2 --n 16 --llim 360 --tolerance 1.5e-12 --out " + csv.string());
    CHECK(ok.code == 0);
    CHECK(slurp(csv).rfind("alpha,max_error\n", 0) == 0);
    const auto tight = cli("validate --target mode2 --n 16 --llim 0 --tolerance 1e-12 --out " + csv.string());
    CHECK(tight.code == 2);
    const auto gauss = cli("validate --target gaussian --n 16 --alphas 0.5:1.5:0.5 --tolerance 1 --out " + csv.string());
    CHECK(gauss.code == 0);
    CHECK(gauss.out.find("global max error") != std::string::npos);
}

TEST_CASE("validate L sweep") {
    const auto csv = workdir() / "ls.csv";
    const auto r = cli("validate --target gaussian --n 16 --alphas 0.5:1.5:0.5 --llim 100 --L-sweep 0.5:3:0.5 "
                       "--tolerance 1 --out " + csv.string());
    CHECK(r.code == 0);
    CHECK(slurp(csv).rfind("L,max_error\n", 0) == 0);
}

TEST_CASE("apply and corrupt caches") {
    const auto bin = workdir() / "m16.bin";
    REQUIRE(cli("matrix build --n 16 --alpha 1.2 --llim 50 --out " + bin.string()).code == 0);
    const auto csv = workdir() / "apply.csv";
    CHECK(cli("apply --matrix " + bin.string() + " --function u3 --out " + csv.string()).code == 0);
    CHECK(slurp(csv).rfind("j,s,x,u,lap\n", 0) == 0);

    std::fstream f(bin, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
    f.close();
    CHECK(cli("apply --matrix " + bin.string() + " --out " + csv.string()).code == 4);
    CHECK(cli("apply --matrix " + (workdir() / "nope.bin").string()).code == 4);
}

TEST_CASE("fisher run writes trace, manifest and summary") {
    const auto dir = workdir() / "fisher";
    fs::remove_all(dir);
    const auto cache = workdir() / "cache";
    fs::remove_all(cache);
    const std::string args = "fisher --alpha 1.5 --n 32 --dt 0.01 --tfinal 1 --fit-window 0.5:1 --out-dir " +
                             dir.string() + " --matrix-cache " + cache.string();
    const auto r = cli(args);
    REQUIRE(r.code == 0);
    const auto trace = slurp(dir / "trace_a1.5000.csv");
    CHECK(trace.rfind("t,x05,ln_x05\n", 0) == 0);
    const auto man = nlohmann::json::parse(slurp(dir / "run_a1.5000.json"));
    CHECK(man["status"] == "ok");
    CHECK(man["matrix_from_cache"] == false);
    CHECK(man["parameters"]["grid"]["L"].get<double>() == doctest::Approx(1000.0 / 3.375));
    CHECK(slurp(dir / "summary.csv").rfind("alpha,L,sigma,inv_alpha,rel_gap,fit_residual,status\n", 0) == 0);

    const auto again = cli(args);
    REQUIRE(again.code == 0);
    const auto man2 = nlohmann::json::parse(slurp(dir / "run_a1.5000.json"));
    CHECK(man2["matrix_from_cache"] == true);
    CHECK(man2["results"]["sigma"] == man["results"]["sigma"]);
    CHECK(slurp(dir / "trace_a1.5000.csv") == trace);
}

TEST_CASE("fisher blow-up is reported per alpha") {
    const auto dir = workdir() / "blowup";
    const auto r = cli("fisher --alpha-sweep 1.5:1.6:0.1 --n 64 --L 1 --dt 0.5 --tfinal 2 --fit-window 0:2 --out-dir " +
                       dir.string());
    CHECK(r.code == 3);
    CHECK(r.out.find("blow-up") != std::string::npos);
    CHECK(fs::exists(dir / "run_a1.6000.json"));
}
