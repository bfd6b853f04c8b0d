#include <doctest.h>

#include <cmath>

#include "npt/errors.hpp"
#include "npt/transforms.hpp"

#include "testutil.hpp"

using namespace npt;

TEST_CASE("hartley matrix frozen values") {
	Matrix h1 = dht_matrix(1);
	CHECK(h1.rows == 1);
	CHECK(h1(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

	Matrix h2 = dht_matrix(2);
	const double s = 1.0 / std::sqrt(2.0);
	CHECK(h2(0, 0) == doctest::Approx(s).epsilon(1e-15));
	CHECK(h2(0, 1) == doctest::Approx(s).epsilon(1e-15));
	CHECK(h2(1, 0) == doctest::Approx(s).epsilon(1e-15));
	CHECK(h2(1, 1) == doctest::Approx(-s).epsilon(1e-15));

	// order 8 entries from cas(2*pi*((k*j) mod 8)/8)/sqrt(8) by hand
	Matrix h8 = dht_matrix(8);
	const double c = 1.0 / (2.0 * std::sqrt(2.0));
	for (std::size_t j = 0; j < 8; ++j)
		CHECK(h8(0, j) == doctest::Approx(c).epsilon(1e-14));
	CHECK(h8(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
	CHECK(h8(2, 2) == doctest::Approx(-c).epsilon(1e-14));
	CHECK(h8(2, 6) == doctest::Approx(-c).epsilon(1e-14));
	CHECK(h8(3, 5) == doctest::Approx(0.0).epsilon(1e-14));
	CHECK(std::fabs(h8(3, 5)) < 1e-14);
	CHECK(h8(5, 5) == doctest::Approx(0.5).epsilon(1e-14));
	CHECK(h8(7, 7) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("hartley matrix is symmetric and matches the angle-reduction oracle") {
	for (std::size_t n : {3u, 5u, 12u, 64u}) {
		Matrix h = dht_matrix(n);
		Matrix ht = transpose(h);
		CHECK(max_abs(sub(h, ht)) == 0.0);
		CHECK(max_abs(sub(h, tu::oracle_hartley(n))) < 1e-12);
	}
}

TEST_CASE("hartley matrix is involutory to 1e-10 up to order 256") {
	for (std::size_t n : {2u, 3u, 4u, 5u, 8u, 16u, 37u, 64u, 128u, 256u}) {
		Matrix h = dht_matrix(n);
		Matrix hh = matmul(h, h);
		CHECK(max_abs(sub(hh, identity(n))) < 1e-10);
	}
}

TEST_CASE("hartley matrix rejects order zero") {
	CHECK_THROWS_AS(dht_matrix(0), error);
}

TEST_CASE("operator construction validates alpha") {
	CHECK_THROWS_AS(npt_operator(8, 0.5), error);
	CHECK_THROWS_AS(npt_operator(8, 0.3), error);
	CHECK_THROWS_AS(npt_operator(8, 1.0001), error);
	CHECK_NOTHROW(npt_operator(8, 1.0));
	CHECK_NOTHROW(npt_operator(8, 0.991));
	CHECK_NOTHROW(npt_operator(8, 0.500001));
	// unchecked path admits the pure-transform endpoint
	NptOperator pure = npt_operator_unchecked(8, 0.0);
	CHECK(max_abs(sub(pure.psi, pure.hartley)) == 0.0);
}

TEST_CASE("operator eigenvalues are 1 and 2*alpha-1") {
	// annihilating polynomial (psi - I)(psi - (2a-1) I) = 0
	for (double alpha : {0.8, 0.991}) {
		NptOperator op = npt_operator(16, alpha);
		Matrix a = sub(op.psi, identity(16));
		Matrix b = op.psi;
		for (std::size_t i = 0; i < 16; ++i)
			b(i, i) -= 2.0 * alpha - 1.0;
		CHECK(max_abs(matmul(a, b)) < 1e-12);
	}

	// order 4 at alpha = 0.991: spectrum {0.982, 1, 1, 1} by the Jacobi oracle
	NptOperator op4 = npt_operator(4, 0.991);
	std::vector<double> ev = tu::jacobi_eigenvalues(op4.psi);
	REQUIRE(ev.size() == 4);
	CHECK(ev[0] == doctest::Approx(0.982).epsilon(1e-10));
	CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-10));
	CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-10));
	CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("forward transform matches the naive product oracle") {
	tu::Gauss rng(42);
	Matrix x(16, 16);
	for (double& v : x.a)
		v = rng.uniform();
	NptOperator op = npt_operator(16, 0.9);
	Matrix got = npt_forward(op, x);
	Matrix want = tu::naive_matmul(tu::naive_matmul(op.psi, x), op.psi);
	CHECK(max_abs(sub(got, want)) < 1e-12);
}

TEST_CASE("closed-form inverse matrix inverts psi") {
	for (double alpha : {0.7, 0.9, 1.0}) {
		NptOperator op = npt_operator(20, alpha);
		Matrix phi = npt_inverse_matrix(op);
		CHECK(max_abs(sub(matmul(op.psi, phi), identity(20))) < 1e-12);
		CHECK(max_abs(sub(matmul(phi, op.psi), identity(20))) < 1e-12);
	}
}

TEST_CASE("direct inverse round-trips random images") {
	tu::Gauss rng(7);
	for (double alpha : {0.8, 0.9, 0.991}) {
		Matrix x(32, 32);
		for (double& v : x.a)
			v = rng.uniform();
		NptOperator op = npt_operator(32, alpha);
		Matrix back = npt_inverse_direct(op, npt_forward(op, x));
		CHECK(fro_norm(sub(back, x)) / fro_norm(x) < 1e-8);
	}
}

TEST_CASE("series inverse converges fast near alpha = 1") {
	tu::Gauss rng(11);
	Matrix x(24, 24);
	for (double& v : x.a)
		v = rng.uniform();
	NptOperator op = npt_operator(24, 0.991);
	Matrix fwd = npt_forward(op, x);
	SeriesResult sr = npt_inverse_series(op, fwd, 1e-12, 200);
	CHECK(sr.iterations_used <= 10);
	CHECK(sr.iterations_used >= 2);
	Matrix direct = npt_inverse_direct(op, fwd);
	CHECK(max_abs(sub(sr.image, direct)) < 1e-10);
	CHECK(fro_norm(sub(sr.image, x)) / fro_norm(x) < 1e-10);
}

TEST_CASE("series inverse is a single term at alpha = 1") {
	Matrix x(8, 8, 0.25);
	x(3, 4) = 0.9;
	NptOperator op = npt_operator(8, 1.0);
	SeriesResult sr = npt_inverse_series(op, npt_forward(op, x), 1e-12, 200);
	CHECK(sr.iterations_used == 1);
	CHECK(max_abs(sub(sr.image, x)) < 1e-14);
}

TEST_CASE("series inverse converges slowly near alpha = 0.5 and reports exhaustion") {
	tu::Gauss rng(13);
	Matrix x(12, 12);
	for (double& v : x.a)
		v = rng.uniform();
	NptOperator op = npt_operator(12, 0.6);
	Matrix fwd = npt_forward(op, x);
	SeriesResult sr = npt_inverse_series(op, fwd, 1e-8, 200);
	CHECK(sr.iterations_used > 10);
	CHECK(fro_norm(sub(sr.image, x)) / fro_norm(x) < 1e-7);
	CHECK_THROWS_AS(npt_inverse_series(op, fwd, 1e-8, 5), error);
}

TEST_CASE("two-sided hartley application matches the matrix product") {
	tu::Gauss rng(17);
	Matrix x(8, 8);
	for (double& v : x.a)
		v = rng.uniform();
	Matrix h = dht_matrix(8);
	Matrix want = tu::naive_matmul(tu::naive_matmul(h, x), h);
	CHECK(max_abs(sub(dht_apply_2d(x), want)) < 1e-12);
}

TEST_CASE("counted transform reports the textbook operation counts") {
	tu::Gauss rng(19);
	for (std::size_t n : {4u, 8u, 16u}) {
		Matrix x(n, n);
		for (double& v : x.a)
			v = rng.uniform();
		CountedTransform ct = dht_apply_2d_counted(x);
		const std::uint64_t n64 = n;
		CHECK(ct.mults == 2 * n64 * n64 * n64);
		CHECK(ct.adds == 2 * n64 * n64 * (n64 - 1));
		CHECK(max_abs(sub(ct.data, dht_apply_2d(x))) < 1e-12);
	}
}
