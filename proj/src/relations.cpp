#include "blr/relations.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "blr/errors.hpp"

namespace blr {

InnerProduct InnerProduct::gf2(std::size_t r) {
    return InnerProduct(InnerProductKind::gf2, r, "gf2");
}

InnerProduct InnerProduct::boolean(std::size_t r) {
    return InnerProduct(InnerProductKind::boolean, r, "boolean");
}

InnerProduct InnerProduct::table(std::size_t r, std::vector<bool> entries) {
    if (r >= 16) throw InvalidParameterError("table inner product: rank too large");
    const std::size_t side = std::size_t{1} << r;
    if (entries.size() != side * side)
        throw InvalidParameterError("table inner product: need 2^r * 2^r entries");
    InnerProduct f(InnerProductKind::table, r, "table");
    f.table_ = std::move(entries);
    return f;
}

int InnerProduct::operator()(std::uint32_t x, std::uint32_t y) const {
    if (r_ < 32 && ((x >> r_) != 0 || (y >> r_) != 0))
        throw WidthMismatchError("inner product operand wider than rank");
    switch (kind_) {
        case InnerProductKind::gf2:
            return std::popcount(x & y) & 1;
        case InnerProductKind::boolean:
            return (x & y) != 0 ? 1 : 0;
        case InnerProductKind::table:
            return table_[(static_cast<std::size_t>(x) << r_) | y] ? 1 : 0;
    }
    return 0;
}

int inner_product(std::uint32_t x, std::uint32_t y, const InnerProduct& f) {
    return f(x, y);
}

RelationSet::RelationSet(std::size_t k, std::size_t d,
                         std::vector<RelationEntry> shared)
    : k_(k), d_(d), uniform_(true), lists_(1, std::move(shared)) {
    normalize_and_check();
}

RelationSet::RelationSet(std::size_t k,
                         std::vector<std::vector<RelationEntry>> per_coord)
    : k_(k), d_(per_coord.size()), uniform_(false), lists_(std::move(per_coord)) {
    normalize_and_check();
}

RelationSet RelationSet::unconstrained(std::size_t k, std::size_t d) {
    if (k > kMaxStarExpansion)
        throw LimitsExceededError("unconstrained relation: k too large to materialize 2^k tuples");
    std::vector<RelationEntry> all;
    all.reserve(std::size_t{1} << k);
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t)
        all.push_back({t, std::nullopt});
    return RelationSet(k, d, std::move(all));
}

void RelationSet::normalize_and_check() {
    if (k_ == 0 || k_ > 64)
        throw InvalidParameterError("relation arity k must be in [1, 64]");
    if (d_ == 0) throw InvalidParameterError("relation set needs d >= 1");
    for (auto& list : lists_) {
        std::sort(list.begin(), list.end(),
                  [](const RelationEntry& a, const RelationEntry& b) {
                      if (a.tuple != b.tuple) return a.tuple < b.tuple;
                      // Smallest witness first so dedup keeps it.
                      if (a.witness.has_value() != b.witness.has_value())
                          return a.witness.has_value();
                      return a.witness < b.witness;
                  });
        list.erase(std::unique(list.begin(), list.end(),
                               [](const RelationEntry& a, const RelationEntry& b) {
                                   return a.tuple == b.tuple;
                               }),
                   list.end());
        if (list.empty())
            throw EmptyRelationError("relation coordinate with zero tuples");
        if (k_ < 64)
            for (const auto& e : list)
                if (e.tuple >> k_)
                    throw InvalidParameterError("relation tuple wider than k bits");
    }
}

bool RelationSet::allows(std::size_t i, std::uint64_t tuple) const {
    const auto& list = coord(i);
    auto it = std::lower_bound(list.begin(), list.end(), tuple,
                               [](const RelationEntry& e, std::uint64_t t) {
                                   return e.tuple < t;
                               });
    return it != list.end() && it->tuple == tuple;
}

std::optional<std::uint32_t> RelationSet::witness_for(std::size_t i,
                                                      std::uint64_t tuple) const {
    const auto& list = coord(i);
    auto it = std::lower_bound(list.begin(), list.end(), tuple,
                               [](const RelationEntry& e, std::uint64_t t) {
                                   return e.tuple < t;
                               });
    if (it == list.end() || it->tuple != tuple) return std::nullopt;
    return it->witness;
}

std::uint64_t RelationSet::total_tuples() const {
    if (uniform_) return static_cast<std::uint64_t>(lists_[0].size()) * d_;
    std::uint64_t total = 0;
    for (const auto& list : lists_) total += list.size();
    return total;
}

std::vector<RelationEntry> build_lowrank_relation(std::size_t r,
                                                  const InnerProduct& f,
                                                  std::size_t max_rank) {
    if (r < 1 || r > max_rank)
        throw InvalidParameterError("rank " + std::to_string(r) +
                                    " outside [1, " + std::to_string(max_rank) + "]");
    if (r > 6)
        throw LimitsExceededError("rank beyond 6: 2^r tuples no longer fit 64 bits");
    if (f.rank() != r)
        throw WidthMismatchError("inner product rank differs from requested rank");
    const std::uint32_t count = std::uint32_t{1} << r;
    std::vector<RelationEntry> entries;
    entries.reserve(count);
    // Ascending x keeps the lexicographically smallest witness on dedup.
    for (std::uint32_t x = 0; x < count; ++x) {
        std::uint64_t tuple = 0;
        for (std::uint32_t j = 0; j < count; ++j)
            if (f(j, x)) tuple |= std::uint64_t{1} << j;
        bool seen = false;
        for (const auto& e : entries)
            if (e.tuple == tuple) {
                seen = true;
                break;
            }
        if (!seen) entries.push_back({tuple, x});
    }
    std::sort(entries.begin(), entries.end(),
              [](const RelationEntry& a, const RelationEntry& b) {
                  return a.tuple < b.tuple;
              });
    return entries;
}

bool validate_center_set(const CenterSet& centers, const RelationSet& relations) {
    if (centers.k() != relations.k())
        throw ShapeMismatchError("validate_center_set: center count differs from relation arity");
    if (centers.width() != relations.d())
        throw ShapeMismatchError("validate_center_set: center width differs from relation dimension");
    for (std::size_t i = 0; i < relations.d(); ++i) {
        std::uint64_t tuple = 0;
        for (std::size_t j = 0; j < centers.k(); ++j)
            if (centers.centers[j].bit(i)) tuple |= std::uint64_t{1} << j;
        if (!relations.allows(i, tuple)) return false;
    }
    return true;
}

namespace {

std::string_view strip_comment(std::string_view line) {
    const auto pos = line.find('#');
    if (pos != std::string_view::npos) line = line.substr(0, pos);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
        line.remove_prefix(1);
    return line;
}

std::vector<RelationEntry> parse_tuple_list(std::string_view body, std::size_t k,
                                            std::size_t line_no) {
    std::vector<RelationEntry> entries;
    std::istringstream words{std::string(body)};
    std::string word;
    while (words >> word) {
        if (word == "*") {
            if (k > kMaxStarExpansion)
                throw LimitsExceededError("line " + std::to_string(line_no) +
                                          ": k too large to expand '*'");
            for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t)
                entries.push_back({t, std::nullopt});
            continue;
        }
        if (word.size() != k)
            throw ParseError("line " + std::to_string(line_no) + ": tuple '" + word +
                             "' is not " + std::to_string(k) + " characters wide");
        std::uint64_t tuple = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (word[j] == '1')
                tuple |= std::uint64_t{1} << j;
            else if (word[j] != '0')
                throw ParseError("line " + std::to_string(line_no) +
                                 ": tuple characters must be '0' or '1'");
        }
        entries.push_back({tuple, std::nullopt});
    }
    if (entries.empty())
        throw EmptyRelationError("line " + std::to_string(line_no) +
                                 ": coordinate lists zero tuples");
    return entries;
}

}  // namespace

RelationSet parse_relations(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        lines.push_back(end == std::string_view::npos ? text.substr(start)
                                                      : text.substr(start, end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }

    std::size_t k = 0, d = 0;
    bool have_header = false;
    bool uniform = false;
    std::vector<RelationEntry> shared;
    std::vector<std::vector<RelationEntry>> per_coord;
    std::size_t next_coord = 1;

    for (std::size_t idx = 0; idx < lines.size(); ++idx) {
        const std::size_t line_no = idx + 1;
        const auto line = strip_comment(lines[idx]);
        if (line.empty()) continue;
        if (!have_header) {
            std::istringstream header{std::string(line)};
            std::string ktok, dtok;
            header >> ktok >> dtok;
            long long kv = -1, dv = -1;
            if (ktok.rfind("k=", 0) == 0 && dtok.rfind("d=", 0) == 0) {
                try {
                    kv = std::stoll(ktok.substr(2));
                    dv = std::stoll(dtok.substr(2));
                } catch (const std::exception&) {
                    kv = dv = -1;
                }
            }
            std::string extra;
            if (kv < 1 || dv < 1 || kv > 64 || (header >> extra))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected header 'k=<int> d=<int>'");
            k = static_cast<std::size_t>(kv);
            d = static_cast<std::size_t>(dv);
            have_header = true;
            continue;
        }
        if (line.rfind("uniform:", 0) == 0) {
            if (uniform || !per_coord.empty())
                throw ParseError("line " + std::to_string(line_no) +
                                 ": unexpected second relation body");
            uniform = true;
            shared = parse_tuple_list(line.substr(8), k, line_no);
            continue;
        }
        if (line.rfind("coord", 0) == 0) {
            if (uniform)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": coord line after a uniform body");
            const auto colon = line.find(':');
            if (colon == std::string_view::npos)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected 'coord <i>: <tuples>'");
            long long index = -1;
            try {
                index = std::stoll(std::string(line.substr(5, colon - 5)));
            } catch (const std::exception&) {
                index = -1;
            }
            if (index < 1 || static_cast<std::size_t>(index) > d)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": coordinate index out of range");
            if (static_cast<std::size_t>(index) < next_coord)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": duplicate coordinate " + std::to_string(index));
            if (static_cast<std::size_t>(index) != next_coord)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": coordinates must appear in order 1.." +
                                 std::to_string(d));
            per_coord.push_back(parse_tuple_list(line.substr(colon + 1), k, line_no));
            ++next_coord;
            continue;
        }
        throw ParseError("line " + std::to_string(line_no) + ": unrecognized line");
    }

    if (!have_header) throw ParseError("missing 'k=<int> d=<int>' header");
    if (uniform) return RelationSet(k, d, std::move(shared));
    if (per_coord.size() != d)
        throw ParseError("expected " + std::to_string(d) + " coord lines, found " +
                         std::to_string(per_coord.size()));
    return RelationSet(k, std::move(per_coord));
}

namespace {

std::string tuple_to_string(std::uint64_t tuple, std::size_t k) {
    std::string out(k, '0');
    for (std::size_t j = 0; j < k; ++j)
        if ((tuple >> j) & 1) out[j] = '1';
    return out;
}

void append_list(std::string& out, const std::vector<RelationEntry>& list,
                 std::size_t k) {
    for (const auto& entry : list) {
        out += ' ';
        out += tuple_to_string(entry.tuple, k);
    }
    out += '\n';
}

}  // namespace

std::string serialize_relations(const RelationSet& relations) {
    std::string out = "k=" + std::to_string(relations.k()) +
                      " d=" + std::to_string(relations.d()) + "\n";
    if (relations.uniform()) {
        out += "uniform:";
        append_list(out, relations.coord(0), relations.k());
        return out;
    }
    for (std::size_t i = 0; i < relations.d(); ++i) {
        out += "coord " + std::to_string(i + 1) + ":";
        append_list(out, relations.coord(i), relations.k());
    }
    return out;
}

}  // namespace blr
