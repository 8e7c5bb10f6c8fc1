#pragma once

// Newform records: parsing/validation of the on-disk format, the local
// fixtures directory, a write-once cache, and (optional) HTTP fetch.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "certify/dirichlet.hpp"
#include "certify/nf.hpp"

namespace certify::store {

struct NewformRecord {
    std::string label;
    long level = 0;
    long weight = 0;
    nf::NumberFieldDesc field;
    dirichlet::CharacterDesc character;
    long an_bound = 0;
    // a_1 .. a_{an_bound}, index 0 unused
    std::vector<nf::NFElement> an;

    const nf::NFElement& a(long n) const;
    bool has(long n) const { return n >= 1 && n <= an_bound; }
};

// Parse + fully validate one record from its JSON text. Checks: schema tag,
// monic field_poly, a_1 = 1, array lengths, label/level/weight consistency,
// character data (conductor re-derived, order exact), multiplicativity
// a_m a_n = a_{mn} for coprime m,n and the Hecke recursion
// a_{p^{e+1}} = a_p a_{p^e} - eps(p) p^{k-1} a_{p^{e-1}} at good p,
// a_{p^e} = a_p^e at p | N.
NewformRecord parse_record(const std::string& json_text);

// canonical serialization: fixed key order, integers as decimal strings;
// parse(serialize(r)) == r byte-for-byte on re-serialization
std::string serialize_record(const NewformRecord& rec);

class Store {
  public:
    // fixtures_dir: read-only local records (<label>.record files)
    // cache_dir: optional write-through cache for fetched records
    // base_url: empty = offline (fetch throws NetworkUnavailable)
    Store(std::string fixtures_dir, std::string cache_dir, std::string base_url);

    // fixtures, then cache, then network (unless offline); caches fetched
    // records atomically (tmp file + rename), never overwrites
    NewformRecord get(const std::string& label);

    // all records with the given level and weight whose character lies in
    // the same orbit (modulus, conductor, order match; exact values for
    // order <= 2), sorted by label
    std::vector<NewformRecord> candidates(long level, long weight,
                                          const dirichlet::CharacterDesc& chi);

    // labels of every record visible locally (fixtures + cache), sorted
    std::vector<std::string> local_labels() const;

    bool offline() const { return base_url_.empty(); }

  private:
    std::string fixtures_dir_, cache_dir_, base_url_;

    std::optional<std::string> read_local(const std::string& label) const;
    void cache_put(const std::string& label, const std::string& text) const;
    std::string fetch_remote(const std::string& path) const;
};

}  // namespace certify::store
