#include "certify/store.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace certify::store {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using nf::Int;
using nf::NFElement;

const NFElement& NewformRecord::a(long n) const {
    if (!has(n))
        throw InsufficientCoefficients("a_n requested beyond stored bound", n);
    return an[static_cast<size_t>(n)];
}

static Int parse_int(const json& j, const char* what) {
    if (!j.is_string()) throw ValidationFailed(std::string("record: ") + what + " must be a decimal string");
    const std::string& s = j.get_ref<const std::string&>();
    if (s.empty()) throw ValidationFailed(std::string("record: empty integer for ") + what);
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) throw ValidationFailed(std::string("record: bad integer for ") + what);
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw ValidationFailed(std::string("record: bad integer for ") + what);
    return Int(s);
}

static long parse_long(const json& j, const char* what) {
    Int v = parse_int(j, what);
    if (!v.fits_slong_p()) throw ValidationFailed(std::string("record: ") + what + " out of range");
    return v.get_si();
}

static NFElement parse_elt(const json& num, const json& den, int degree) {
    if (!num.is_array() || num.empty() || static_cast<int>(num.size()) > degree)
        throw ValidationFailed("record: coefficient vector has bad length");
    NFElement e;
    for (const auto& c : num) e.num.push_back(parse_int(c, "an numerator"));
    e.den = parse_int(den, "an denominator");
    if (e.den <= 0) throw ValidationFailed("record: nonpositive denominator");
    e.canonicalize();
    return e;
}

static NFElement parse_char_value(const json& j, int degree) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ValidationFailed("record: character value must be {num, den}");
    return parse_elt(j.at("num"), j.at("den"), degree);
}

NewformRecord parse_record(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ValidationFailed(std::string("record: JSON parse error: ") + e.what());
    }
    for (const char* key :
         {"schema", "label", "level", "weight", "char_modulus", "char_conductor", "char_order",
          "char_gens", "char_values", "field_poly", "an_bound", "an_denominators",
          "an_numerators"})
        if (!j.contains(key))
            throw ValidationFailed(std::string("record: missing field ") + key);
    if (j.at("schema").get<std::string>() != "newform-record/1")
        throw ValidationFailed("record: unknown schema tag");

    NewformRecord rec;
    rec.label = j.at("label").get<std::string>();
    rec.level = parse_long(j.at("level"), "level");
    rec.weight = parse_long(j.at("weight"), "weight");
    if (rec.level < 1 || rec.weight < 1)
        throw ValidationFailed("record: level and weight must be positive");

    std::vector<Int> poly;
    for (const auto& c : j.at("field_poly")) poly.push_back(parse_int(c, "field_poly"));
    rec.field = nf::NumberFieldDesc(poly);
    const int d = rec.field.degree();

    // label sanity: "<level>.<weight>.<iso>.<orbit>"
    {
        std::ostringstream prefix;
        prefix << rec.level << "." << rec.weight << ".";
        if (rec.label.rfind(prefix.str(), 0) != 0)
            throw ValidationFailed("record: label does not match level/weight");
    }

    long char_mod = parse_long(j.at("char_modulus"), "char_modulus");
    long char_cond = parse_long(j.at("char_conductor"), "char_conductor");
    long char_order = parse_long(j.at("char_order"), "char_order");
    if (char_mod != rec.level)
        throw ValidationFailed("record: character modulus must equal the level");
    std::vector<long> gens;
    for (const auto& g : j.at("char_gens")) gens.push_back(parse_long(g, "char_gens"));
    std::vector<NFElement> values;
    for (const auto& v : j.at("char_values")) values.push_back(parse_char_value(v, d));
    rec.character =
        dirichlet::make_character(char_mod, char_cond, char_order, gens, values, rec.field);

    rec.an_bound = parse_long(j.at("an_bound"), "an_bound");
    if (rec.an_bound < 1) throw ValidationFailed("record: an_bound must be positive");
    const auto& nums = j.at("an_numerators");
    const auto& dens = j.at("an_denominators");
    if (static_cast<long>(nums.size()) != rec.an_bound ||
        static_cast<long>(dens.size()) != rec.an_bound)
        throw ValidationFailed("record: an arrays must have an_bound entries");
    rec.an.resize(static_cast<size_t>(rec.an_bound) + 1);
    for (long n = 1; n <= rec.an_bound; ++n)
        rec.an[static_cast<size_t>(n)] =
            parse_elt(nums[static_cast<size_t>(n - 1)], dens[static_cast<size_t>(n - 1)], d);

    if (!(rec.an[1] == NFElement::from_int(1)))
        throw ValidationFailed("record: not normalized (a_1 != 1)");

    // Hecke consistency.  Good primes satisfy
    //   a_{p^{e+1}} = a_p a_{p^e} - eps(p) p^{k-1} a_{p^{e-1}},
    // bad primes a_{p^e} = a_p^e, and a is multiplicative across coprime
    // indices; all of it checked exactly up to the bound.
    std::vector<bool> is_comp(static_cast<size_t>(rec.an_bound) + 1, false);
    for (long p = 2; p <= rec.an_bound; ++p) {
        if (is_comp[static_cast<size_t>(p)]) continue;
        for (long m = p * p; m <= rec.an_bound; m += p) is_comp[static_cast<size_t>(m)] = true;
        if (rec.level % p == 0) {
            NFElement pw = rec.an[static_cast<size_t>(p)];
            for (long q = p * p; q <= rec.an_bound; q *= p) {
                pw = nf::nf_mul(pw, rec.an[static_cast<size_t>(p)], rec.field);
                if (!(rec.an[static_cast<size_t>(q)] == pw))
                    throw ValidationFailed("record: a_{p^e} != a_p^e at bad p = " +
                                           std::to_string(p));
            }
        } else {
            Int pk1 = 1;
            for (long i = 0; i + 1 < rec.weight; ++i) pk1 *= p;
            NFElement mult = nf::nf_scale(dirichlet::eval(rec.character, p), pk1);
            NFElement prev = NFElement::from_int(1);
            NFElement cur = rec.an[static_cast<size_t>(p)];
            for (long q = p * p; q <= rec.an_bound; q *= p) {
                NFElement next =
                    nf::nf_sub(nf::nf_mul(rec.an[static_cast<size_t>(p)], cur, rec.field),
                               nf::nf_mul(mult, prev, rec.field), rec.field);
                if (!(rec.an[static_cast<size_t>(q)] == next))
                    throw ValidationFailed("record: Hecke recursion fails at p = " +
                                           std::to_string(p));
                prev = cur;
                cur = next;
            }
        }
    }
    for (long m = 2; m * 2 <= rec.an_bound; ++m)
        for (long n = m; m * n <= rec.an_bound; ++n) {
            if (std::gcd(m, n) != 1) continue;
            NFElement prod =
                nf::nf_mul(rec.an[static_cast<size_t>(m)], rec.an[static_cast<size_t>(n)], rec.field);
            if (!(rec.an[static_cast<size_t>(m * n)] == prod))
                throw ValidationFailed("record: multiplicativity fails at (" + std::to_string(m) +
                                       ", " + std::to_string(n) + ")");
        }
    return rec;
}

static json elt_json(const NFElement& e) {
    NFElement c = e;
    c.canonicalize();
    json num = json::array();
    if (c.num.empty())
        num.push_back("0");
    else
        for (const Int& v : c.num) num.push_back(v.get_str());
    return json{{"num", num}, {"den", c.den.get_str()}};
}

std::string serialize_record(const NewformRecord& rec) {
    json j;
    j["schema"] = "newform-record/1";
    j["label"] = rec.label;
    j["level"] = std::to_string(rec.level);
    j["weight"] = std::to_string(rec.weight);
    j["char_modulus"] = std::to_string(rec.character.modulus);
    j["char_conductor"] = std::to_string(rec.character.conductor);
    j["char_order"] = std::to_string(rec.character.order);
    json gens = json::array();
    for (long g : rec.character.gens) gens.push_back(std::to_string(g));
    j["char_gens"] = gens;
    json cvals = json::array();
    for (const auto& v : rec.character.gen_values) cvals.push_back(elt_json(v));
    j["char_values"] = cvals;
    json poly = json::array();
    for (const Int& c : rec.field.min_poly) poly.push_back(c.get_str());
    j["field_poly"] = poly;
    j["an_bound"] = std::to_string(rec.an_bound);
    json dens = json::array(), nums = json::array();
    for (long n = 1; n <= rec.an_bound; ++n) {
        json e = elt_json(rec.an[static_cast<size_t>(n)]);
        nums.push_back(e["num"]);
        dens.push_back(e["den"]);
    }
    j["an_denominators"] = dens;
    j["an_numerators"] = nums;
    return j.dump(1) + "\n";
}

Store::Store(std::string fixtures_dir, std::string cache_dir, std::string base_url)
    : fixtures_dir_(std::move(fixtures_dir)),
      cache_dir_(std::move(cache_dir)),
      base_url_(std::move(base_url)) {}

static std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

static bool valid_label(const std::string& label) {
    if (label.empty()) return false;
    for (char c : label)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.')) return false;
    return true;
}

std::optional<std::string> Store::read_local(const std::string& label) const {
    if (!fixtures_dir_.empty())
        if (auto t = read_file(fs::path(fixtures_dir_) / (label + ".record"))) return t;
    if (!cache_dir_.empty())
        if (auto t = read_file(fs::path(cache_dir_) / (label + ".record"))) return t;
    return std::nullopt;
}

void Store::cache_put(const std::string& label, const std::string& text) const {
    if (cache_dir_.empty()) return;
    fs::create_directories(cache_dir_);
    fs::path final_path = fs::path(cache_dir_) / (label + ".record");
    if (fs::exists(final_path)) return;  // write-once
    fs::path tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw Error("cache write failed: " + tmp.string());
    }
    fs::rename(tmp, final_path);
}

std::string Store::fetch_remote(const std::string& path) const {
    if (base_url_.empty())
        throw NetworkUnavailable("offline: remote record fetch disabled");
    // base_url like http://host:port/prefix
    std::string url = base_url_;
    std::string host_part = url;
    std::string prefix;
    auto scheme = host_part.find("://");
    if (scheme != std::string::npos) host_part = host_part.substr(scheme + 3);
    auto slash = host_part.find('/');
    if (slash != std::string::npos) {
        prefix = host_part.substr(slash);
        host_part = host_part.substr(0, slash);
    }
    httplib::Client cli(host_part);
    cli.set_connection_timeout(5, 0);
    cli.set_read_timeout(10, 0);
    auto res = cli.Get(prefix + path);
    if (!res)
        throw NetworkUnavailable("record server unreachable at " + host_part);
    if (res->status == 404) throw NotFound("no such record: " + path);
    if (res->status != 200)
        throw NetworkUnavailable("record server returned status " + std::to_string(res->status));
    return res->body;
}

NewformRecord Store::get(const std::string& label) {
    if (!valid_label(label)) throw ValidationFailed("malformed newform label: " + label);
    if (auto text = read_local(label)) return parse_record(*text);
    std::string text = fetch_remote("/record/" + label);
    NewformRecord rec = parse_record(text);  // validate before caching
    if (rec.label != label)
        throw ValidationFailed("record label mismatch: asked " + label + ", got " + rec.label);
    cache_put(label, text);
    return rec;
}

std::vector<std::string> Store::local_labels() const {
    std::vector<std::string> out;
    for (const std::string& dir : {fixtures_dir_, cache_dir_}) {
        if (dir.empty() || !fs::is_directory(dir)) continue;
        for (const auto& ent : fs::directory_iterator(dir)) {
            if (!ent.is_regular_file()) continue;
            std::string name = ent.path().filename().string();
            const std::string suffix = ".record";
            if (name.size() > suffix.size() &&
                name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
                out.push_back(name.substr(0, name.size() - suffix.size()));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NewformRecord> Store::candidates(long level, long weight,
                                             const dirichlet::CharacterDesc& chi) {
    // remote index when online, local scan otherwise
    std::vector<std::string> labels;
    if (!base_url_.empty()) {
        std::string body =
            fetch_remote("/index/" + std::to_string(level) + "/" + std::to_string(weight));
        std::istringstream is(body);
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) labels.push_back(line);
        std::sort(labels.begin(), labels.end());
    } else {
        labels = local_labels();
    }
    std::vector<NewformRecord> out;
    for (const std::string& label : labels) {
        // cheap prefilter on the label before parsing
        std::string prefix = std::to_string(level) + "." + std::to_string(weight) + ".";
        if (label.rfind(prefix, 0) != 0) continue;
        NewformRecord rec = get(label);
        if (rec.level != level || rec.weight != weight) continue;
        dirichlet::CharacterDesc c = chi;
        if (chi.modulus != level) c = dirichlet::descend(chi, level);
        if (!dirichlet::same_character(rec.character, c)) continue;
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
    return out;
}

}  // namespace certify::store
