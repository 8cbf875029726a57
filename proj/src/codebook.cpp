#include "scma/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace scma {

namespace {

constexpr double kModulusTolerance = 1e-9;
constexpr double kMatchTolerance = 1e-9;

bool same_value(const Complex& a, const Complex& b)
{
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= kMatchTolerance * scale;
}

bool constant_modulus(std::span<const double> norms)
{
    if (norms.empty())
        return true;
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    if (*hi == 0.0)
        return false;
    return (*hi - *lo) / *hi < kModulusTolerance;
}

} // namespace

SystemConfig SystemConfig::make(std::size_t users, std::size_t resources, std::size_t dims, std::size_t points)
{
    if (users == 0 || resources == 0 || dims == 0 || points < 2)
        throw Error("system dimensions must be positive");
    if (!(resources < users))
        throw Error("system is not overloaded: need N < K");
    if (!(dims < resources))
        throw Error("need d_v < N");
    if (!std::has_single_bit(points))
        throw Error("constellation size must be a power of two");
    SystemConfig c;
    c.users = users;
    c.resources = resources;
    c.dims = dims;
    c.points = points;
    c.layers = users * dims;
    if (c.layers % resources != 0)
        throw Error("irregular mapping: d_f * N != K'");
    c.layers_per_resource = c.layers / resources;
    return c;
}

std::size_t SystemConfig::bits_per_symbol() const noexcept
{
    return static_cast<std::size_t>(std::countr_zero(points));
}

// ---------------------------------------------------------------------------

MappingMatrix::MappingMatrix(std::size_t users, std::size_t dims, std::vector<std::vector<std::uint8_t>> entries)
    : users_(users), dims_(dims), entries_(std::move(entries))
{
    const std::size_t k_prime = users_ * dims_;
    if (entries_.empty())
        throw Error("mapping matrix has no rows");
    for (const auto& row : entries_)
        if (row.size() != k_prime)
            throw Error("mapping row length differs from K'");

    layer_resource_.assign(k_prime, 0);
    layer_sets_.assign(entries_.size(), {});
    for (std::size_t l = 0; l < k_prime; ++l) {
        std::size_t ones = 0;
        for (std::size_t n = 0; n < entries_.size(); ++n) {
            const auto v = entries_[n][l];
            if (v > 1)
                throw Error("mapping entries must be 0 or 1");
            if (v) {
                ++ones;
                layer_resource_[l] = n;
                layer_sets_[n].push_back(l);
            }
        }
        if (ones != 1)
            throw Error("invalid mapping column " + std::to_string(l + 1) + ": expected exactly one nonzero entry");
    }
    for (const auto& f : layer_sets_)
        if (f.size() != layer_sets_[0].size())
            throw Error("irregular mapping: |F_n| differs between resources");
}

std::vector<std::size_t> MappingMatrix::resources_of_user(std::size_t user) const
{
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < dims_; ++l)
        out.push_back(layer_resource_[user * dims_ + l]);
    return out;
}

std::vector<std::vector<std::uint8_t>> MappingMatrix::indicator() const
{
    // diag(S_k S_k^T)_n = sum_l s_{n,l}^2 restricted to user k's block.
    std::vector<std::vector<std::uint8_t>> p(resources(), std::vector<std::uint8_t>(users_, 0));
    for (std::size_t n = 0; n < resources(); ++n)
        for (std::size_t k = 0; k < users_; ++k) {
            unsigned acc = 0;
            for (std::size_t l = 0; l < dims_; ++l)
                acc += entries_[n][k * dims_ + l] * entries_[n][k * dims_ + l];
            p[n][k] = static_cast<std::uint8_t>(acc);
        }
    return p;
}

bool MappingMatrix::has_identity_prefix() const
{
    const std::size_t n_res = resources();
    if (layers() < n_res)
        return false;
    for (std::size_t n = 0; n < n_res; ++n)
        for (std::size_t l = 0; l < n_res; ++l)
            if (entry(n, l) != (n == l))
                return false;
    return true;
}

// ---------------------------------------------------------------------------

const char* to_string(ModulusClass c) noexcept
{
    switch (c) {
    case ModulusClass::constant:
        return "constant";
    case ModulusClass::omega_decomposable:
        return "omega-decomposable";
    case ModulusClass::general:
        return "general";
    }
    return "general";
}

Codebook::Codebook(std::size_t dims, std::vector<std::vector<CVector>> points)
    : dims_(dims), points_(std::move(points))
{
    if (points_.empty())
        throw Error("codebook has no users");
    const std::size_t m = points_[0].size();
    if (m < 2 || !std::has_single_bit(m))
        throw Error("codebook size must be a power of two");
    for (const auto& user : points_) {
        if (user.size() != m)
            throw Error("codebook size differs between users");
        for (const auto& x : user)
            if (x.size() != dims_)
                throw Error("codeword dimension differs from d_v");
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                if (std::all_of(user[a].begin(), user[a].end(), [&, i = std::size_t{0}](const Complex& v) mutable {
                        return same_value(v, user[b][i++]);
                    }))
                    throw Error("codebook is not bijective: repeated codeword");
    }

    bool constant = true;
    for (const auto& user : points_) {
        std::vector<double> norms;
        for (const auto& x : user)
            norms.push_back(squared_norm(x));
        constant = constant && constant_modulus(norms);
    }
    if (constant) {
        class_ = ModulusClass::constant;
    } else {
        try {
            (void)omega_decompose(*this);
            class_ = ModulusClass::omega_decomposable;
        } catch (const Error&) {
            class_ = ModulusClass::general;
        }
    }
}

std::size_t Codebook::bits_per_symbol() const noexcept
{
    return static_cast<std::size_t>(std::countr_zero(size()));
}

double Codebook::average_energy() const
{
    double acc = 0.0;
    for (const auto& user : points_)
        for (const auto& x : user)
            acc += squared_norm(x);
    return acc / static_cast<double>(users() * size());
}

const CVector& Codebook::map_bits(std::span<const std::uint8_t> bits, std::size_t user) const
{
    if (bits.size() != bits_per_symbol())
        throw Error("expected " + std::to_string(bits_per_symbol()) + " bits per symbol");
    std::size_t c = 0;
    for (auto b : bits) {
        if (b > 1)
            throw Error("bit values must be 0 or 1");
        c = (c << 1) | b;
    }
    return points_.at(user)[c];
}

std::size_t Codebook::codeword_of(std::size_t user, const CVector& x) const
{
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t c = 0; c < size(); ++c) {
        double d = 0.0;
        for (std::size_t l = 0; l < dims_; ++l)
            d += std::norm(points_[user][c][l] - x[l]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

CMatrix OmegaDecomposition::omega(std::size_t layers) const
{
    CMatrix w(layers, depth * layers);
    for (std::size_t l = 0; l < layers; ++l)
        for (std::size_t j = 0; j < depth; ++j)
            w(l, l * depth + j) = weights[j];
    return w;
}

CVector OmegaDecomposition::reconstruct(std::size_t user, std::size_t codeword) const
{
    const auto& comp = components.at(user).at(codeword);
    const std::size_t dims = comp.size() / depth;
    CVector x(dims);
    for (std::size_t l = 0; l < dims; ++l)
        for (std::size_t j = 0; j < depth; ++j)
            x[l] += weights[j] * comp[l * depth + j];
    return x;
}

OmegaDecomposition omega_decompose(const Codebook& cb)
{
    static const Error general("general modulus; MSD optimality not guaranteed");

    const std::size_t m_points = cb.size();
    const int log2m = std::countr_zero(m_points);
    if (log2m % 2 != 0)
        throw general;
    OmegaDecomposition out;
    out.depth = static_cast<std::size_t>(log2m / 2);
    for (std::size_t j = 0; j < out.depth; ++j)
        out.weights.push_back(std::ldexp(1.0, static_cast<int>(out.depth - 1 - j)));

    const std::size_t dims = cb.dims();
    out.components.assign(cb.users(), std::vector<std::vector<Complex>>(m_points));
    for (std::size_t k = 0; k < cb.users(); ++k) {
        for (std::size_t l = 0; l < dims; ++l) {
            // Distinct values taken by this layer, smallest modulus first.
            std::vector<Complex> values;
            for (std::size_t c = 0; c < m_points; ++c) {
                const Complex v = cb.point(k, c)[l];
                if (std::none_of(values.begin(), values.end(), [&](const Complex& u) { return same_value(u, v); }))
                    values.push_back(v);
            }
            std::stable_sort(values.begin(), values.end(),
                             [](const Complex& a, const Complex& b) { return std::norm(a) < std::norm(b); });
            if (values.size() < 4)
                throw general;
            std::vector<Complex> base(values.begin(), values.begin() + 4);
            std::vector<double> norms;
            for (const auto& b : base)
                norms.push_back(std::norm(b));
            if (!constant_modulus(norms))
                throw general;
            out.base.push_back(base);

            // Exhaustive match over all 4^m digit tuples.
            const std::size_t tuples = std::size_t{1} << (2 * out.depth);
            for (std::size_t c = 0; c < m_points; ++c) {
                const Complex v = cb.point(k, c)[l];
                std::size_t matches = 0;
                std::vector<Complex> digits;
                for (std::size_t t = 0; t < tuples; ++t) {
                    Complex sum{};
                    std::vector<Complex> cand(out.depth);
                    for (std::size_t j = 0; j < out.depth; ++j) {
                        cand[j] = base[(t >> (2 * (out.depth - 1 - j))) & 3u];
                        sum += out.weights[j] * cand[j];
                    }
                    if (same_value(sum, v)) {
                        ++matches;
                        digits = cand;
                    }
                }
                if (matches != 1)
                    throw general;
                auto& comp = out.components[k][c];
                comp.resize(dims * out.depth);
                for (std::size_t j = 0; j < out.depth; ++j)
                    comp[l * out.depth + j] = digits[j];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

bool Relabeling::is_identity() const
{
    for (std::size_t i = 0; i < user_order.size(); ++i)
        if (user_order[i] != i)
            return false;
    for (std::size_t i = 0; i < resource_order.size(); ++i)
        if (resource_order[i] != i)
            return false;
    return true;
}

namespace {

// Calls f(selection) for every r-subset of {0..n-1} in lexicographic order until f returns true.
template <typename F>
bool for_each_combination(std::size_t n, std::size_t r, F&& f)
{
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i)
        idx[i] = i;
    if (r > n)
        return false;
    while (true) {
        if (f(idx))
            return true;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1))
            --i;
        if (i == 0)
            return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

RelabelResult relabel_upper_triangular(const MappingMatrix& s)
{
    const std::size_t n_res = s.resources();
    const std::size_t dims = s.dims();
    if (n_res % dims != 0)
        throw Error("no N/d_v orthogonal users: N is not a multiple of d_v; layer-level relabeling is not supported");
    const std::size_t needed = n_res / dims;

    struct Candidate {
        std::vector<std::size_t> users;
        std::vector<std::size_t> resources;
    };
    std::optional<Candidate> first_any;
    std::optional<Candidate> first_in_place;

    for_each_combination(s.users(), needed, [&](const std::vector<std::size_t>& sel) {
        std::vector<bool> used(n_res, false);
        for (auto k : sel)
            for (auto n : s.resources_of_user(k)) {
                if (used[n])
                    return false;
                used[n] = true;
            }
        Candidate c;
        c.users = sel;
        std::stable_sort(c.users.begin(), c.users.end(), [&](std::size_t a, std::size_t b) {
            const auto ra = s.resources_of_user(a);
            const auto rb = s.resources_of_user(b);
            return *std::min_element(ra.begin(), ra.end()) < *std::min_element(rb.begin(), rb.end());
        });
        for (auto k : c.users)
            for (auto n : s.resources_of_user(k))
                c.resources.push_back(n);
        bool in_place = true;
        for (std::size_t i = 0; i < n_res; ++i)
            in_place = in_place && c.resources[i] == i;
        if (!first_any)
            first_any = c;
        if (in_place) {
            first_in_place = c;
            return true;
        }
        return false;
    });

    if (!first_any)
        throw Error("no set of N/d_v mutually orthogonal users exists; layer-level relabeling is not supported");
    const Candidate& chosen = first_in_place ? *first_in_place : *first_any;

    Relabeling r;
    r.resource_order = chosen.resources;
    r.user_order = chosen.users;
    for (std::size_t k = 0; k < s.users(); ++k)
        if (std::find(chosen.users.begin(), chosen.users.end(), k) == chosen.users.end())
            r.user_order.push_back(k);

    std::vector<std::vector<std::uint8_t>> e(n_res, std::vector<std::uint8_t>(s.layers(), 0));
    for (std::size_t nn = 0; nn < n_res; ++nn)
        for (std::size_t nk = 0; nk < s.users(); ++nk)
            for (std::size_t l = 0; l < dims; ++l)
                e[nn][nk * dims + l] = s.entry(r.resource_order[nn], r.user_order[nk] * dims + l) ? 1 : 0;
    return {r, MappingMatrix(s.users(), dims, std::move(e))};
}

ScmaSystem apply_relabeling(const ScmaSystem& sys, const Relabeling& r)
{
    const std::size_t dims = sys.config.dims;
    std::vector<std::vector<std::uint8_t>> e(sys.config.resources, std::vector<std::uint8_t>(sys.config.layers, 0));
    for (std::size_t nn = 0; nn < sys.config.resources; ++nn)
        for (std::size_t nk = 0; nk < sys.config.users; ++nk)
            for (std::size_t l = 0; l < dims; ++l)
                e[nn][nk * dims + l] = sys.mapping.entry(r.resource_order[nn], r.user_order[nk] * dims + l) ? 1 : 0;

    std::vector<std::vector<CVector>> pts;
    for (std::size_t nk = 0; nk < sys.config.users; ++nk) {
        std::vector<CVector> user;
        for (std::size_t c = 0; c < sys.codebook.size(); ++c)
            user.push_back(sys.codebook.point(r.user_order[nk], c));
        pts.push_back(std::move(user));
    }
    return {sys.config, MappingMatrix(sys.config.users, dims, std::move(e)), Codebook(dims, std::move(pts))};
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct LineReader {
    std::istream& in;
    std::size_t number = 0;

    // Next non-empty line with comments stripped; false at end of input.
    bool next(std::string& out)
    {
        std::string line;
        while (std::getline(in, line)) {
            ++number;
            if (auto pos = line.find('#'); pos != std::string::npos)
                line.erase(pos);
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                continue;
            const auto e = line.find_last_not_of(" \t\r");
            out = line.substr(b, e - b + 1);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error("codebook parse error at line " + std::to_string(number) + ": " + what);
    }

    std::string require(const char* what)
    {
        std::string line;
        if (!next(line))
            fail(std::string("unexpected end of file, expected ") + what);
        return line;
    }
};

std::size_t keyword_value(LineReader& r, const std::string& key)
{
    std::istringstream ss(r.require(key.c_str()));
    std::string k;
    long long v = -1;
    if (!(ss >> k >> v) || k != key || v <= 0)
        r.fail("expected '" + key + " <positive integer>'");
    std::string extra;
    if (ss >> extra)
        r.fail("trailing content after '" + key + "'");
    return static_cast<std::size_t>(v);
}

// Parses "[re, im]" entries from `text`; returns false on malformed input.
bool parse_complex_list(const std::string& text, CVector& out)
{
    const char* p = text.c_str();
    auto skip = [&] {
        while (*p == ' ' || *p == '\t')
            ++p;
    };
    while (true) {
        skip();
        if (*p == '\0')
            return true;
        if (*p != '[')
            return false;
        ++p;
        char* end = nullptr;
        const double re = std::strtod(p, &end);
        if (end == p)
            return false;
        p = end;
        skip();
        if (*p != ',')
            return false;
        ++p;
        const double im = std::strtod(p, &end);
        if (end == p)
            return false;
        p = end;
        skip();
        if (*p != ']')
            return false;
        ++p;
        out.emplace_back(re, im);
    }
}

} // namespace

ScmaSystem parse_codebook(std::istream& in)
{
    LineReader r{in};
    {
        std::istringstream ss(r.require("header"));
        std::string magic;
        int version = 0;
        if (!(ss >> magic >> version) || magic != "scma-codebook" || version != 1)
            r.fail("expected header 'scma-codebook 1'");
    }
    const std::size_t users = keyword_value(r, "users");
    const std::size_t resources = keyword_value(r, "resources");
    const std::size_t dims = keyword_value(r, "dims");
    const std::size_t points = keyword_value(r, "points");
    SystemConfig cfg;
    try {
        cfg = SystemConfig::make(users, resources, dims, points);
    } catch (const Error& e) {
        r.fail(e.what());
    }

    if (r.require("mapping") != "mapping")
        r.fail("expected 'mapping'");
    std::vector<std::vector<std::uint8_t>> rows;
    for (std::size_t n = 0; n < resources; ++n) {
        std::istringstream ss(r.require("mapping row"));
        std::vector<std::uint8_t> row;
        int v = 0;
        while (ss >> v) {
            if (v != 0 && v != 1)
                r.fail("mapping entries must be 0 or 1");
            row.push_back(static_cast<std::uint8_t>(v));
        }
        if (!ss.eof())
            r.fail("malformed mapping row");
        if (row.size() != cfg.layers)
            r.fail("mapping row has " + std::to_string(row.size()) + " entries, expected K' = " +
                   std::to_string(cfg.layers));
        rows.push_back(std::move(row));
    }
    MappingMatrix mapping(users, dims, std::move(rows));
    if (mapping.layers_per_resource() != cfg.layers_per_resource)
        r.fail("mapping d_f does not match K'/N");

    const std::size_t bits = cfg.bits_per_symbol();
    std::vector<std::vector<CVector>> pts(users, std::vector<CVector>(points));
    for (std::size_t k = 0; k < users; ++k) {
        std::istringstream ss(r.require("user block"));
        std::string word;
        std::size_t idx = 0;
        if (!(ss >> word >> idx) || word != "user" || idx != k + 1)
            r.fail("expected 'user " + std::to_string(k + 1) + "'");
        std::vector<bool> seen(points, false);
        for (std::size_t c = 0; c < points; ++c) {
            const std::string line = r.require("codeword");
            const auto sp = line.find_first_of(" \t");
            const std::string label = line.substr(0, sp);
            if (label.size() != bits || label.find_first_not_of("01") != std::string::npos)
                r.fail("bit label '" + label + "' must have " + std::to_string(bits) + " binary digits");
            const std::size_t value = std::stoul(label, nullptr, 2);
            if (seen[value])
                r.fail("duplicate bit label " + label);
            seen[value] = true;
            CVector x;
            if (sp == std::string::npos || !parse_complex_list(line.substr(sp), x))
                r.fail("malformed codeword entries; expected [re, im] pairs");
            if (x.size() != dims)
                r.fail("codeword has " + std::to_string(x.size()) + " entries, expected d_v = " + std::to_string(dims));
            pts[k][value] = std::move(x);
        }
    }
    std::string extra;
    if (r.next(extra))
        r.fail("unexpected trailing content '" + extra + "'");
    return {cfg, std::move(mapping), Codebook(dims, std::move(pts))};
}

ScmaSystem load_codebook(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open codebook file '" + path + "'");
    return parse_codebook(in);
}

void write_codebook(std::ostream& out, const ScmaSystem& sys)
{
    const auto& c = sys.config;
    out << "scma-codebook 1\n"
        << "users " << c.users << "\n"
        << "resources " << c.resources << "\n"
        << "dims " << c.dims << "\n"
        << "points " << c.points << "\n"
        << "mapping\n";
    for (std::size_t n = 0; n < c.resources; ++n) {
        for (std::size_t l = 0; l < c.layers; ++l)
            out << (l ? " " : "") << (sys.mapping.entry(n, l) ? 1 : 0);
        out << "\n";
    }
    const std::size_t bits = c.bits_per_symbol();
    char buf[96];
    for (std::size_t k = 0; k < c.users; ++k) {
        out << "user " << k + 1 << "\n";
        for (std::size_t cw = 0; cw < c.points; ++cw) {
            for (std::size_t b = 0; b < bits; ++b)
                out << ((cw >> (bits - 1 - b)) & 1u);
            for (const auto& v : sys.codebook.point(k, cw)) {
                std::snprintf(buf, sizeof buf, " [%.17g, %.17g]", v.real(), v.imag());
                out << buf;
            }
            out << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in systems

namespace {

// User k occupies resources {a, b}; the first two users are orthogonal so the
// mapping is already in upper-triangular form.
constexpr std::size_t kBuiltinUsers = 6;
constexpr std::size_t kBuiltinResources = 4;
constexpr std::size_t kBuiltinDims = 2;
constexpr std::size_t kBuiltinPairs[kBuiltinUsers][kBuiltinDims] = {{0, 1}, {2, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};

MappingMatrix builtin_mapping()
{
    std::vector<std::vector<std::uint8_t>> e(kBuiltinResources,
                                             std::vector<std::uint8_t>(kBuiltinUsers * kBuiltinDims, 0));
    for (std::size_t k = 0; k < kBuiltinUsers; ++k)
        for (std::size_t l = 0; l < kBuiltinDims; ++l)
            e[kBuiltinPairs[k][l]][k * kBuiltinDims + l] = 1;
    return MappingMatrix(kBuiltinUsers, kBuiltinDims, std::move(e));
}

// Gray-coded PAM level for two bits: 00 -> -3, 01 -> -1, 11 -> 1, 10 -> 3.
double gray_pam4(unsigned hi, unsigned lo)
{
    static constexpr double levels[4] = {-3.0, -1.0, 3.0, 1.0};
    return levels[(hi << 1) | lo];
}


// Each resource superimposes three layers. Layer i of F_n gets its own power
// level and rotation so the sum constellation on a resource stays separable
// without fading and message passing converges close to the joint optimum.
constexpr unsigned kQpskRelabel[4] = {0, 3, 1, 2};
constexpr double kQpskAmplitude[3] = {1.4, 1.0, 0.5};
constexpr double kQamAmplitude[3] = {1.0, 1.0, 1.0};
constexpr double kLayerRotation[3] = {0.0, std::numbers::pi / 6.0, std::numbers::pi / 2.0};

std::vector<Complex> builtin_gains(const MappingMatrix& mapping, const double* amplitude)
{
    double power = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        power += amplitude[i] * amplitude[i];
    const double scale = std::sqrt(3.0 / power);
    std::vector<Complex> gain(mapping.layers(), Complex(1.0, 0.0));
    for (std::size_t n = 0; n < mapping.resources(); ++n) {
        const auto& f = mapping.layer_set(n);
        for (std::size_t i = 0; i < f.size(); ++i)
            gain[f[i]] = std::polar(scale * amplitude[i], kLayerRotation[i]);
    }
    return gain;
}

// `relabel` permutes the codeword index seen by the second dimension.
ScmaSystem builtin_system(std::size_t points, Complex (*symbol)(unsigned), const double* amplitude,
                          const unsigned* relabel)
{
    auto mapping = builtin_mapping();
    const auto gain = builtin_gains(mapping, amplitude);
    std::vector<std::vector<CVector>> pts(kBuiltinUsers);
    for (std::size_t k = 0; k < kBuiltinUsers; ++k)
        for (unsigned c = 0; c < points; ++c) {
            CVector x(kBuiltinDims);
            for (std::size_t l = 0; l < kBuiltinDims; ++l)
                x[l] = symbol(l > 0 && relabel ? relabel[c] : c) * gain[k * kBuiltinDims + l];
            pts[k].push_back(std::move(x));
        }
    return {SystemConfig::make(kBuiltinUsers, kBuiltinResources, kBuiltinDims, points), std::move(mapping),
            Codebook(kBuiltinDims, std::move(pts))};
}

} // namespace

ScmaSystem builtin_qam4()
{
    return builtin_system(4, [](unsigned c) {
        return Complex(1.0 - 2.0 * ((c >> 1) & 1u), 1.0 - 2.0 * (c & 1u)) / std::numbers::sqrt2;
    }, kQpskAmplitude, kQpskRelabel);
}

ScmaSystem builtin_qam16()
{
    return builtin_system(16, [](unsigned c) {
        return Complex(gray_pam4((c >> 3) & 1u, (c >> 2) & 1u), gray_pam4((c >> 1) & 1u, c & 1u));
    }, kQamAmplitude, nullptr);
}

ScmaSystem resolve_codebook(const std::string& spec)
{
    if (spec == "builtin:qam4")
        return builtin_qam4();
    if (spec == "builtin:qam16")
        return builtin_qam16();
    if (spec.rfind("builtin:", 0) == 0)
        throw Error("unknown built-in codebook '" + spec + "'");
    return load_codebook(spec);
}

} // namespace scma
