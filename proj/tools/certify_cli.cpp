// certify-cli: certify large image for a newform mod a degree-one prime,
// verify previously written certificates, prefetch records, and check
// whether a level is skippable in a survey.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "certify/certificate.hpp"

namespace {

constexpr const char* kCacheEnvVar = "CERTIFY_CACHE_DIR";

struct StoreArgs {
    std::string fixtures = "fixtures";
    std::string cache_dir;
    std::string base_url;
    bool offline = false;
};

void add_store_options(CLI::App* cmd, StoreArgs& args) {
    cmd->add_option("--fixtures", args.fixtures, "directory of local .record files");
    cmd->add_option("--cache-dir", args.cache_dir,
                    "write-through cache for fetched records (env " + std::string(kCacheEnvVar) +
                        "; flag wins)");
    cmd->add_option("--base-url", args.base_url, "record service base URL (empty = offline)");
    cmd->add_flag("--offline", args.offline, "never touch the network");
}

certify::store::Store make_store(const StoreArgs& args) {
    std::string cache = args.cache_dir;
    if (cache.empty())
        if (const char* env = std::getenv(kCacheEnvVar)) cache = env;
    std::string url = args.offline ? std::string() : args.base_url;
    return certify::store::Store(args.fixtures, cache, url);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw certify::NotFound("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"large-image certification for mod-ell Galois representations"};
    app.require_subcommand(1);

    // --- certify ---
    StoreArgs cert_store;
    std::string label, out_path;
    certify::ff::u64 ell = 0, root = 0;
    certify::certificate::CertifyOptions opts;
    auto* c = app.add_subcommand("certify", "run the full decision procedure");
    c->add_option("label", label, "newform label, e.g. 9099.2.a.g")->required();
    c->add_option("--ell", ell, "rational prime ell")->required();
    c->add_option("--root", root, "root c of the degree-one prime (ell, beta - c)")->required();
    c->add_option("--p", opts.p, "prime exactly dividing the level (default: auto)");
    c->add_option("--budget-bits", opts.budget_bits, "witness confidence in bits");
    c->add_option("--test-prime-bound", opts.test_prime_bound, "initial elimination prime bound");
    c->add_flag("--force-p-part", opts.force_p_part,
                "proceed although the nebentypus has nontrivial p-part");
    c->add_option("--out", out_path, "write the certificate here (default: stdout)");
    add_store_options(c, cert_store);

    // --- verify ---
    StoreArgs ver_store;
    std::string cert_path;
    auto* v = app.add_subcommand("verify", "re-derive every check in a certificate");
    v->add_option("certificate", cert_path, "certificate file")->required();
    add_store_options(v, ver_store);

    // --- fetch ---
    StoreArgs fetch_store;
    std::string fetch_label;
    auto* f = app.add_subcommand("fetch", "fetch and cache one record");
    f->add_option("label", fetch_label, "newform label")->required();
    add_store_options(f, fetch_store);

    // --- skip-check ---
    long skip_level = 0;
    auto* s = app.add_subcommand("skip-check",
                                 "is the level skippable in a trivial-nebentypus survey?");
    s->add_option("level", skip_level, "level N")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c) {
            auto store = make_store(cert_store);
            auto cert = certify::certificate::certify(label, ell, root, store, opts);
            std::string text = certify::certificate::serialize(cert);
            if (!out_path.empty()) {
                std::ofstream os(out_path, std::ios::binary);
                if (!os) throw certify::NotFound("cannot write " + out_path);
                os << text;
            } else {
                std::cout << text;
            }
            std::cerr << "verdict: " << certify::certificate::verdict_name(cert.verdict);
            if (!cert.diagnostic.empty()) std::cerr << " (" << cert.diagnostic << ")";
            std::cerr << "\n";
            return certify::certificate::verdict_exit_code(cert.verdict);
        }
        if (*v) {
            auto store = make_store(ver_store);
            auto res = certify::certificate::verify(slurp(cert_path), store);
            if (res.ok) {
                std::cout << "verified\n";
                return 0;
            }
            std::cout << "FAILED: " << res.first_failure << "\n";
            return 1;
        }
        if (*f) {
            auto store = make_store(fetch_store);
            auto rec = store.get(fetch_label);
            std::cout << rec.label << " level " << rec.level << " weight " << rec.weight
                      << " (a_n through " << rec.an_bound << ")\n";
            return 0;
        }
        if (*s) {
            certify::dirichlet::CharacterDesc trivial;
            bool skip = certify::certificate::level_skippable(skip_level, trivial);
            std::cout << (skip ? "skippable" : "not-skippable") << "\n";
            return 0;
        }
    } catch (const certify::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
