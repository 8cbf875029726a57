#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "scma/codebook.hpp"

using namespace scma;

namespace {

std::vector<std::vector<std::uint8_t>> mapping_for(const std::vector<std::pair<int, int>>& pairs, std::size_t n)
{
    std::vector<std::vector<std::uint8_t>> s(n, std::vector<std::uint8_t>(pairs.size() * 2, 0));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        s[pairs[k].first][2 * k] = 1;
        s[pairs[k].second][2 * k + 1] = 1;
    }
    return s;
}

const std::vector<std::pair<int, int>> kRegular = {{0, 1}, {2, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};

std::string text_of(const ScmaSystem& sys)
{
    std::ostringstream out;
    write_codebook(out, sys);
    return out.str();
}

} // namespace

TEST_CASE("system config derives K' and d_f")
{
    const auto c = SystemConfig::make(6, 4, 2, 4);
    CHECK(c.layers == 12);
    CHECK(c.layers_per_resource == 3);
    CHECK(c.bits_per_symbol() == 2);
    CHECK_THROWS_AS(SystemConfig::make(4, 4, 2, 4), Error);
    CHECK_THROWS_AS(SystemConfig::make(6, 4, 4, 4), Error);
    CHECK_THROWS_AS(SystemConfig::make(6, 4, 2, 6), Error);
}

TEST_CASE("mapping matrix layer sets and indicator")
{
    const MappingMatrix s(6, 2, mapping_for(kRegular, 4));
    CHECK(s.layers_per_resource() == 3);
    CHECK(s.layer_set(0) == std::vector<std::size_t>{0, 4, 6});
    CHECK(s.resources_of_user(3) == std::vector<std::size_t>{0, 3});
    CHECK(s.has_identity_prefix());
    const auto p = s.indicator();
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t n = 0; n < 4; ++n) {
            // p_k = diag(S_k S_k^T)
            int d = 0;
            for (std::size_t l = 0; l < 2; ++l)
                d += s.entry(n, 2 * k + l) * s.entry(n, 2 * k + l);
            CHECK(p[n][k] == d);
        }
}

TEST_CASE("mapping column with two ones is rejected")
{
    auto e = mapping_for(kRegular, 4);
    e[3][0] = 1;
    try {
        MappingMatrix bad(6, 2, e);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("invalid mapping column") != std::string::npos);
    }
}

TEST_CASE("relabel: already upper triangular gives identity")
{
    const MappingMatrix s(6, 2, mapping_for(kRegular, 4));
    const auto r = relabel_upper_triangular(s);
    CHECK(r.relabeling.is_identity());
    CHECK(r.mapping == s);
}

TEST_CASE("relabel: swapped users are restored")
{
    const std::vector<std::pair<int, int>> swapped = {{0, 2}, {0, 3}, {0, 1}, {2, 3}, {1, 2}, {1, 3}};
    const MappingMatrix s(6, 2, mapping_for(swapped, 4));
    CHECK_FALSE(s.has_identity_prefix());
    const auto r = relabel_upper_triangular(s);
    CHECK(r.mapping.has_identity_prefix());
    CHECK(r.mapping == MappingMatrix(6, 2, mapping_for(kRegular, 4)));
    CHECK(r.relabeling.user_order == std::vector<std::size_t>{2, 3, 0, 1, 4, 5});
}

TEST_CASE("relabel: resources are permuted when needed")
{
    // Orthogonal users {1,2},{0,3}: a resource permutation is required.
    const std::vector<std::pair<int, int>> p = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
    const MappingMatrix s(6, 2, mapping_for(p, 4));
    const auto r = relabel_upper_triangular(s);
    CHECK(r.mapping.has_identity_prefix());
}

TEST_CASE("relabel: no orthogonal users is an error")
{
    // K = 3, N = 3, d_v = 2: users {0,1},{1,2},{0,2} pairwise intersect.
    const std::vector<std::pair<int, int>> tri = {{0, 1}, {1, 2}, {0, 2}};
    const MappingMatrix s(3, 2, mapping_for(tri, 3));
    CHECK_THROWS_AS(relabel_upper_triangular(s), Error);
}

TEST_CASE("relabeled system detects the same symbols")
{
    const auto base = builtin_qam4();
    Relabeling r;
    r.user_order = {2, 3, 0, 1, 4, 5};
    r.resource_order = {0, 1, 2, 3};
    const auto moved = apply_relabeling(base, r);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(moved.codebook.point(k, c) == base.codebook.point(r.user_order[k], c));
    const auto back = relabel_upper_triangular(moved.mapping);
    const auto restored = apply_relabeling(moved, back.relabeling);
    CHECK(restored.mapping.has_identity_prefix());
}

TEST_CASE("built-in codebooks and their modulus classes")
{
    const auto q4 = builtin_qam4();
    CHECK(q4.config.layers == 12);
    CHECK(q4.config.layers_per_resource == 3);
    CHECK(q4.codebook.modulus_class() == ModulusClass::constant);
    const auto q16 = builtin_qam16();
    CHECK(q16.codebook.modulus_class() == ModulusClass::omega_decomposable);
    const auto om = omega_decompose(q16.codebook);
    CHECK(om.depth == 2);
    CHECK(om.weights == std::vector<double>{2.0, 1.0});
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t c = 0; c < 16; ++c) {
            const auto r = om.reconstruct(k, c);
            for (std::size_t l = 0; l < 2; ++l)
                CHECK(std::abs(r[l] - q16.codebook.point(k, c)[l]) <= 1e-12);
        }
}

TEST_CASE("omega: 3+j decomposes as 2(1+j) + (1-j)")
{
    std::vector<std::vector<CVector>> pts(1);
    const double lv[4] = {-3, -1, 1, 3};
    for (double re : lv)
        for (double im : lv)
            pts[0].push_back({Complex(re, im)});
    const Codebook cb(1, pts);
    CHECK(cb.modulus_class() == ModulusClass::omega_decomposable);
    const auto om = omega_decompose(cb);
    const std::size_t idx = 3 * 4 + 2; // 3 + 1j
    REQUIRE(cb.point(0, idx)[0] == Complex(3, 1));
    CHECK(om.components[0][idx][0] == Complex(1, 1));
    CHECK(om.components[0][idx][1] == Complex(1, -1));
    for (std::size_t c = 0; c < 16; ++c)
        CHECK(om.reconstruct(0, c)[0] == cb.point(0, c)[0]); // exact on integers
}

TEST_CASE("omega: 64-QAM has depth 3 and weights 4,2,1")
{
    std::vector<std::vector<CVector>> pts(1);
    for (int re = -7; re <= 7; re += 2)
        for (int im = -7; im <= 7; im += 2)
            pts[0].push_back({Complex(re, im)});
    const Codebook cb(1, pts);
    const auto om = omega_decompose(cb);
    CHECK(om.depth == 3);
    CHECK(om.weights == std::vector<double>{4.0, 2.0, 1.0});
    for (std::size_t c = 0; c < 64; ++c)
        CHECK(om.reconstruct(0, c)[0] == cb.point(0, c)[0]);
    const CMatrix w = om.omega(2);
    CHECK(w.rows() == 2);
    CHECK(w.cols() == 6);
    CHECK(w(0, 0) == Complex(4));
    CHECK(w(1, 5) == Complex(1));
    CHECK(w(0, 3) == Complex(0));
}

TEST_CASE("omega: 4-QAM is the identity decomposition")
{
    const auto om = omega_decompose(builtin_qam4().codebook);
    CHECK(om.depth == 1);
    CHECK(om.weights == std::vector<double>{1.0});
}

TEST_CASE("omega: non-decomposable constellation is general")
{
    std::vector<std::vector<CVector>> pts(1);
    for (double a : {0.3, 1.0, 1.7, 2.9})
        pts[0].push_back({Complex(a, 0.1 * a * a)});
    const Codebook cb(1, pts);
    CHECK(cb.modulus_class() == ModulusClass::general);
    CHECK_THROWS_WITH_AS(omega_decompose(cb), "general modulus; MSD optimality not guaranteed", Error);
}

TEST_CASE("map_bits is a bijection and round-trips")
{
    const auto sys = builtin_qam16();
    for (std::size_t k = 0; k < 6; ++k) {
        std::set<std::pair<double, double>> seen;
        for (std::size_t c = 0; c < 16; ++c) {
            std::vector<std::uint8_t> bits(4);
            for (std::size_t m = 0; m < 4; ++m)
                bits[m] = sys.codebook.bit(c, m);
            const auto& x = sys.codebook.map_bits(bits, k);
            CHECK(x == sys.codebook.point(k, c));
            CHECK(sys.codebook.codeword_of(k, x) == c);
            seen.insert({x[0].real(), x[0].imag()});
        }
        CHECK(seen.size() == 16);
    }
    const std::vector<std::uint8_t> zeros(4, 0);
    CHECK(sys.codebook.map_bits(zeros, 0) == sys.codebook.point(0, 0));
    const std::vector<std::uint8_t> short_bits(3, 0);
    CHECK_THROWS_AS(sys.codebook.map_bits(short_bits, 0), Error);
}

TEST_CASE("codebook text round-trip")
{
    for (const auto& sys : {builtin_qam4(), builtin_qam16()}) {
        std::istringstream in(text_of(sys));
        const auto back = parse_codebook(in);
        CHECK(back.config == sys.config);
        CHECK(back.mapping == sys.mapping);
        CHECK(back.codebook == sys.codebook);
    }
}

TEST_CASE("shipped codebook files equal the built-ins")
{
    const std::string dir = std::string(SCMA_SOURCE_DIR) + "/data/codebooks/";
    const auto q4 = load_codebook(dir + "qam4_k6n4.txt");
    CHECK(q4.codebook == builtin_qam4().codebook);
    CHECK(q4.mapping == builtin_qam4().mapping);
    const auto q16 = resolve_codebook(dir + "qam16_k6n4.txt");
    CHECK(q16.codebook == builtin_qam16().codebook);
    CHECK(q16.config.layers_per_resource == 3);
}

TEST_CASE("codebook parse errors")
{
    auto text = text_of(builtin_qam4());
    SUBCASE("bad magic")
    {
        std::istringstream in("not-a-codebook\n");
        CHECK_THROWS_AS(parse_codebook(in), Error);
    }
    SUBCASE("duplicate mapping ones")
    {
        const auto pos = text.find("mapping\n") + 8;
        text[pos + 2] = '1'; // second column of row 0 now has two ones
        std::istringstream in(text);
        CHECK_THROWS_WITH_AS(parse_codebook(in), doctest::Contains("invalid mapping column"), Error);
    }
    SUBCASE("truncated")
    {
        std::istringstream in(text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(parse_codebook(in), Error);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(load_codebook("/nonexistent/codebook.txt"), Error);
    }
    SUBCASE("unknown builtin")
    {
        CHECK_THROWS_AS(resolve_codebook("builtin:qam64"), Error);
    }
}
