#include "certify/certificate.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cstring>
#include <ctime>

namespace certify::certificate {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), self-contained
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kShaK = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& data) {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::string msg = data;
    std::uint64_t bitlen = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (8 * i)) & 0xff));

    for (size_t off = 0; off < msg.size(); off += 64) {
        std::array<std::uint32_t, 64> w{};
        for (int t = 0; t < 16; ++t)
            w[t] = (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * t])) << 24) |
                   (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * t + 1]))
                    << 16) |
                   (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * t + 2]))
                    << 8) |
                   static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * t + 3]));
        for (int t = 16; t < 64; ++t) {
            std::uint32_t s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
            std::uint32_t s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
            w[t] = w[t - 16] + s0 + w[t - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int t = 0; t < 64; ++t) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + kShaK[t] + w[t];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (std::uint32_t x : h)
        for (int i = 7; i >= 0; --i) out.push_back(hex[(x >> (4 * i)) & 0xf]);
    return out;
}

// ---------------------------------------------------------------------------
// verdict bookkeeping
// ---------------------------------------------------------------------------

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::LARGE_IMAGE: return "LARGE_IMAGE";
        case Verdict::POSSIBLY_OLD: return "POSSIBLY_OLD";
        case Verdict::INCONCLUSIVE_REDUCIBLE_SUSPECTED:
            return "INCONCLUSIVE_REDUCIBLE_SUSPECTED";
        case Verdict::PRECONDITION_FAILED: return "PRECONDITION_FAILED";
    }
    return "PRECONDITION_FAILED";
}

int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::LARGE_IMAGE: return 0;
        case Verdict::POSSIBLY_OLD: return 2;
        case Verdict::INCONCLUSIVE_REDUCIBLE_SUSPECTED: return 3;
        case Verdict::PRECONDITION_FAILED: return 4;
    }
    return 4;
}

bool level_skippable(long level, const dirichlet::CharacterDesc& eps) {
    if (!eps.is_trivial())
        throw PreconditionFailed("level_skippable: requires trivial nebentypus");
    long n = level;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            int e = 0;
            while (n % q == 0) { n /= q; ++e; }
            if (e == 1) return true;
        }
    return n > 1;  // leftover prime divides exactly once
}

// ---------------------------------------------------------------------------
// the pipeline
// ---------------------------------------------------------------------------

namespace {

long auto_pick_p(const store::NewformRecord& f) {
    long n = f.level;
    for (long q = 2; n > 1; ++q) {
        if (n % q != 0) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        if (e == 1 && dirichlet::p_part_trivial(f.character, q)) return q;
    }
    return 0;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Certificate certify(const std::string& label, ff::u64 ell, ff::u64 root, store::Store& source,
                    const CertifyOptions& options) {
    Certificate cert;
    cert.label = label;
    cert.ell = ell;
    cert.root = root;
    cert.options = options;
    cert.timestamp = utc_timestamp();
    try {
        store::NewformRecord f = source.get(label);
        cert.record_digest = sha256_hex(store::serialize_record(f));

        if (!ff::is_prime_u64(ell)) throw PreconditionFailed("ell is not prime");
        if (f.level % static_cast<long>(ell) == 0)
            throw PreconditionFailed("ell divides the level");

        // residual degree one: root must index a degree-one prime above ell
        nf::ResiduePrime lambda{ell, root, f.field};
        bool root_ok = false;
        for (const auto& pr : nf::degree_one_primes(f.field, ell)) root_ok |= (pr.root == root);
        if (!root_ok)
            throw PreconditionFailed("root does not define a degree-one prime above ell");

        long p = options.p != 0 ? options.p : auto_pick_p(f);
        if (p == 0)
            throw PreconditionFailed(
                "no prime exactly divides the level with trivial p-part of the nebentypus");
        if (!ff::is_prime_u64(static_cast<ff::u64>(p)) || f.level % p != 0)
            throw PreconditionFailed("p must be a prime divisor of the level");
        if ((f.level / p) % p == 0) throw PreconditionFailed("p^2 divides the level");
        cert.p = p;
        cert.p_part_trivial = dirichlet::p_part_trivial(f.character, p);
        if (!cert.p_part_trivial && !options.force_p_part)
            throw PreconditionFailed(
                "nebentypus has nontrivial p-part (pass the override to proceed)");

        long budget = witness::default_budget(ell, options.budget_bits);
        cert.witness = witness::find_witness(f, lambda, budget);
        if (!cert.witness->found) {
            cert.verdict = Verdict::INCONCLUSIVE_REDUCIBLE_SUSPECTED;
            cert.diagnostic = "no irreducibility witness within budget " + std::to_string(budget);
            return cert;
        }

        oldness::OldnessOptions oo;
        oo.test_prime_bound = options.test_prime_bound;
        oo.force_p_part = options.force_p_part;
        cert.oldness = oldness::oldness_verdict(f, lambda, p, source, oo);
        if (!cert.oldness->not_old) {
            cert.verdict = Verdict::POSSIBLY_OLD;
            return cert;
        }

        cert.image = image::compute_image(f, lambda, p, true);
        cert.fields = fieldinv::predict_fields(f, lambda, p, *cert.image);
        cert.verdict = Verdict::LARGE_IMAGE;
    } catch (const Error& e) {
        cert.verdict = Verdict::PRECONDITION_FAILED;
        cert.diagnostic = e.what();
    }
    return cert;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

std::string dec(long v) { return std::to_string(v); }
std::string dec(ff::u64 v) { return std::to_string(v); }
std::string dec(const nf::Int& v) { return v.get_str(); }

ordered_json witness_json(const witness::WitnessOutcome& w) {
    ordered_json j;
    j["found"] = w.found ? "1" : "0";
    ordered_json att = ordered_json::array();
    for (const auto& a : w.attempts) {
        ordered_json x;
        x["r"] = dec(a.r);
        x["trace"] = dec(a.trace);
        x["det"] = dec(a.det);
        x["irreducible"] = a.irreducible ? "1" : "0";
        att.push_back(x);
    }
    j["attempts"] = att;
    return j;
}

ordered_json oldness_json(const oldness::OldnessVerdict& v) {
    ordered_json j;
    j["not_old"] = v.not_old ? "1" : "0";
    j["test_prime_bound"] = dec(v.test_prime_bound);
    ordered_json pp = ordered_json::array();
    for (long r : v.prefilter_primes) pp.push_back(dec(r));
    j["prefilter_primes"] = pp;
    j["prefilter_survivors"] = v.prefilter_survivors;
    ordered_json cands = ordered_json::array();
    for (const auto& c : v.candidates) {
        ordered_json x;
        x["label"] = c.candidate_label;
        x["eliminated"] = c.eliminated ? "1" : "0";
        ordered_json kills = ordered_json::array();
        for (const auto& k : c.kills) {
            ordered_json kk;
            kk["twist"] = dec(k.twist);
            kk["n"] = dec(k.n);
            kk["residue"] = dec(k.residue);
            kills.push_back(kk);
        }
        x["kills"] = kills;
        ordered_json st = ordered_json::array();
        for (long t : c.surviving_twists) st.push_back(dec(t));
        x["surviving_twists"] = st;
        ordered_json pc = ordered_json::array();
        for (long r : c.primes_checked) pc.push_back(dec(r));
        x["primes_checked"] = pc;
        cands.push_back(x);
    }
    j["candidates"] = cands;
    if (v.level1) {
        ordered_json l1;
        ordered_json surv = ordered_json::array();
        for (const auto& s : v.level1->survivors) {
            ordered_json ss;
            ss["weight"] = dec(s.weight);
            ss["twist"] = dec(s.twist);
            ss["kernel_dim"] = dec(s.kernel_dim);
            surv.push_back(ss);
        }
        l1["survivors"] = surv;
        ordered_json ue = ordered_json::array();
        for (long r : v.level1->uniform_eliminators) ue.push_back(dec(r));
        l1["uniform_eliminators"] = ue;
        ordered_json tp = ordered_json::array();
        for (long r : v.level1->test_primes) tp.push_back(dec(r));
        l1["test_primes"] = tp;
        l1["weight_lo"] = dec(v.level1->weight_lo);
        l1["weight_hi"] = dec(v.level1->weight_hi);
        j["level1"] = l1;
    }
    return j;
}

ordered_json image_json(const image::ImageDescription& im) {
    ordered_json j;
    j["M"] = dec(im.M);
    ordered_json d = ordered_json::array();
    for (ff::u64 x : im.delta) d.push_back(dec(x));
    j["delta"] = d;
    j["delta_order"] = dec(im.delta_order);
    j["group_order"] = dec(im.group_order);
    j["is_full"] = im.is_full ? "1" : "0";
    j["projective"] = image::projective_name(im.projective);
    j["forced_mode"] = im.forced_mode ? "1" : "0";
    return j;
}

ordered_json prediction_json(const fieldinv::FieldPrediction& p) {
    ordered_json j;
    j["degree"] = dec(p.degree);
    if (p.signature)
        j["signature"] = {dec(p.signature->real_embeddings), dec(p.signature->complex_pairs)};
    ordered_json ram = ordered_json::array();
    for (long q : p.ramified_within) ram.push_back(dec(q));
    j["ramified_within"] = ram;
    j["p_exponent"] = dec(p.p_exponent);
    j["tame_at_p"] = p.tame_at_p ? "1" : "0";
    j["galois_closure_group"] = image::projective_name(p.galois_closure_group);
    j["notes"] = p.notes;
    return j;
}

ordered_json certificate_body(const Certificate& cert) {
    ordered_json doc;
    doc["schema"] = "certificate/1";
    ordered_json in;
    in["label"] = cert.label;
    in["ell"] = dec(cert.ell);
    in["root"] = dec(cert.root);
    in["p"] = dec(cert.p);
    in["budget_bits"] = dec(cert.options.budget_bits);
    in["test_prime_bound"] = dec(cert.options.test_prime_bound);
    in["force_p_part"] = cert.options.force_p_part ? "1" : "0";
    in["record_digest"] = cert.record_digest;
    doc["input"] = in;
    doc["p_part_trivial"] = cert.p_part_trivial ? "1" : "0";
    if (cert.witness) doc["witness"] = witness_json(*cert.witness);
    if (cert.oldness) doc["oldness"] = oldness_json(*cert.oldness);
    if (cert.image) doc["image"] = image_json(*cert.image);
    if (cert.fields) {
        doc["field_predictions"]["k"] = prediction_json(cert.fields->first);
        doc["field_predictions"]["K"] = prediction_json(cert.fields->second);
    }
    doc["verdict"] = verdict_name(cert.verdict);
    doc["diagnostic"] = cert.diagnostic;
    return doc;
}

}  // namespace

std::string serialize(const Certificate& cert) {
    ordered_json doc = certificate_body(cert);
    doc["digest"] = sha256_hex(doc.dump(1));
    doc["timestamp"] = cert.timestamp;
    return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

namespace {

long jlong(const ordered_json& j) { return std::stol(j.get<std::string>()); }
ff::u64 ju64(const ordered_json& j) { return std::stoull(j.get<std::string>()); }

VerifyResult fail(const std::string& check) { return {false, check}; }

}  // namespace

VerifyResult verify(const std::string& certificate_text, store::Store& source) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(certificate_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationFailed(std::string("certificate does not parse: ") + e.what());
    }
    if (!doc.contains("schema") || doc["schema"] != "certificate/1")
        return fail("schema tag");

    // digest: recompute over the body without timestamp/digest
    {
        ordered_json body = doc;
        body.erase("timestamp");
        std::string recorded = body.value("digest", "");
        body.erase("digest");
        if (sha256_hex(body.dump(1)) != recorded) return fail("canonical digest");
    }

    const std::string verdict = doc["verdict"];
    if (verdict == "PRECONDITION_FAILED") return {};  // nothing further recorded

    const auto& in = doc["input"];
    store::NewformRecord f = source.get(in["label"]);
    if (sha256_hex(store::serialize_record(f)) != in["record_digest"])
        return fail("record digest");
    const ff::u64 ell = ju64(in["ell"]);
    nf::ResiduePrime lambda{ell, ju64(in["root"]), f.field};
    const long p = jlong(in["p"]);
    ff::PrimeField F(ell);

    // witness attempts: traces, determinants, irreducibility all re-derived
    if (!doc.contains("witness")) return fail("witness section missing");
    {
        const auto& w = doc["witness"];
        for (const auto& a : w["attempts"]) {
            long r = jlong(a["r"]);
            if (nf::reduce(f.a(r), lambda) != ju64(a["trace"])) return fail("witness trace");
            ff::u64 det = F.pow(F.reduce(r), static_cast<ff::u64>(f.weight - 1));
            det = F.mul(det, dirichlet::eval_mod_lambda(f.character, r, lambda));
            if (det != ju64(a["det"])) return fail("witness determinant");
            bool irr = ff::quad_irreducible(ju64(a["trace"]), det, F);
            if (irr != (a["irreducible"] == "1")) return fail("witness irreducibility");
        }
        bool found = w["found"] == "1";
        if (found != (verdict == "LARGE_IMAGE" || verdict == "POSSIBLY_OLD"))
            return fail("witness found flag");
        if (found && (w["attempts"].empty() ||
                      w["attempts"].back()["irreducible"] != "1"))
            return fail("witness terminal attempt");
    }
    if (verdict == "INCONCLUSIVE_REDUCIBLE_SUSPECTED") return {};

    // oldness: re-run every candidate elimination over the recorded primes
    if (!doc.contains("oldness")) return fail("oldness section missing");
    {
        const auto& o = doc["oldness"];
        bool all_elim = true;
        for (const auto& c : o["candidates"]) {
            store::NewformRecord cand = source.get(c["label"]);
            std::vector<long> primes;
            for (const auto& r : c["primes_checked"]) primes.push_back(jlong(r));
            auto res = oldness::eliminate_candidate(f, lambda, cand, primes);
            if (res.eliminated != (c["eliminated"] == "1")) return fail("candidate eliminated flag");
            if (res.kills.size() != c["kills"].size()) return fail("kill count");
            for (size_t i = 0; i < res.kills.size(); ++i) {
                const auto& k = c["kills"][i];
                if (res.kills[i].twist != jlong(k["twist"]) || res.kills[i].n != jlong(k["n"]) ||
                    res.kills[i].residue != ju64(k["residue"]))
                    return fail("elimination residue");
            }
            std::vector<long> st;
            for (const auto& t : c["surviving_twists"]) st.push_back(jlong(t));
            if (res.surviving_twists != st) return fail("surviving twists");
            all_elim &= res.eliminated;
        }
        if (o.contains("level1")) {
            const auto& l1 = o["level1"];
            std::vector<long> primes;
            for (const auto& r : l1["test_primes"]) primes.push_back(jlong(r));
            auto rep = level1::eigensystem_occurs(f, lambda, primes);
            if (rep.survivors.size() != l1["survivors"].size()) return fail("level-1 survivors");
            for (size_t i = 0; i < rep.survivors.size(); ++i) {
                const auto& s = l1["survivors"][i];
                if (rep.survivors[i].weight != jlong(s["weight"]) ||
                    rep.survivors[i].twist != jlong(s["twist"]) ||
                    rep.survivors[i].kernel_dim != jlong(s["kernel_dim"]))
                    return fail("level-1 kernel dimension");
            }
            std::vector<long> ue;
            for (const auto& r : l1["uniform_eliminators"]) ue.push_back(jlong(r));
            if (rep.uniform_eliminators != ue) return fail("level-1 uniform eliminators");
            all_elim &= rep.survivors.empty();
        }
        if ((o["not_old"] == "1") != all_elim) return fail("oldness verdict flag");
        if ((verdict == "LARGE_IMAGE") != all_elim) return fail("verdict vs oldness");
    }
    if (verdict == "POSSIBLY_OLD") return {};

    // image: recompute Delta and all derived flags
    if (!doc.contains("image")) return fail("image section missing");
    {
        const auto& ij = doc["image"];
        auto im = image::compute_image(f, lambda, p, true);
        std::vector<ff::u64> delta;
        for (const auto& d : ij["delta"]) delta.push_back(ju64(d));
        image::verify_subgroup(delta, ell);
        if (im.delta != delta) return fail("Delta elements");
        if (im.M != jlong(ij["M"])) return fail("image modulus M");
        if (im.delta_order != jlong(ij["delta_order"])) return fail("Delta order");
        if (im.group_order != nf::Int(ij["group_order"].get<std::string>()))
            return fail("group order");
        if (im.is_full != (ij["is_full"] == "1")) return fail("is_full flag");
        if (std::string(image::projective_name(im.projective)) != ij["projective"])
            return fail("projective class");
        if (im.forced_mode != (ij["forced_mode"] == "1")) return fail("forced mode flag");
    }
    return {};
}

}  // namespace certify::certificate
