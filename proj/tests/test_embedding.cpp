#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "shiftscan/embedding.hpp"
#include "shiftscan/error.hpp"
#include "shiftscan/kernels.hpp"

using namespace shiftscan;
using testhelpers::TempDir;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("load_embeddings parses the text format") {
  TempDir dir("embed_load");
  const auto path = dir.path() / "2013.vec";
  write_file(path, "3 2\nalpha 1.000000 0.000000\nbeta 0.500000 0.250000\ngamma -1.000000 2.000000\n");

  const EmbeddingModel m = load_embeddings(path);
  CHECK(m.vocab.size() == 3);
  CHECK(m.dim == 2);
  CHECK(m.epoch_label == "2013");
  CHECK(!m.normalized);
  CHECK(m.vocab.token(0) == "alpha");
  CHECK(m.vocab.token(2) == "gamma");
  CHECK(m.vectors.at(1, 1) == doctest::Approx(0.25));
  CHECK(m.vectors.at(2, 0) == doctest::Approx(-1.0));
}

TEST_CASE("load_embeddings rejects malformed input") {
  TempDir dir("embed_bad");

  SUBCASE("bad header") {
    write_file(dir.path() / "a.vec", "3 x\n");
    CHECK_THROWS_AS((void)load_embeddings(dir.path() / "a.vec"), DataError);
  }
  SUBCASE("row dimensionality mismatch") {
    write_file(dir.path() / "b.vec", "2 2\na 1.0 2.0\nb 1.0 2.0 3.0\n");
    CHECK_THROWS_WITH_AS((void)load_embeddings(dir.path() / "b.vec"),
                         doctest::Contains("line 3"), DataError);
  }
  SUBCASE("duplicate token") {
    write_file(dir.path() / "c.vec", "2 1\na 1.0\na 2.0\n");
    CHECK_THROWS_WITH_AS((void)load_embeddings(dir.path() / "c.vec"),
                         doctest::Contains("duplicate token"), DataError);
  }
  SUBCASE("truncated file") {
    write_file(dir.path() / "d.vec", "3 1\na 1.0\n");
    CHECK_THROWS_AS((void)load_embeddings(dir.path() / "d.vec"), DataError);
  }
  SUBCASE("zero dimensionality") {
    write_file(dir.path() / "e.vec", "1 0\na\n");
    CHECK_THROWS_AS((void)load_embeddings(dir.path() / "e.vec"), DataError);
  }
}

TEST_CASE("save/load roundtrip preserves a 50x8 random model to printed precision") {
  TempDir dir("embed_rt");
  EmbeddingModel m = testhelpers::random_model(50, 8, 7, "rt");
  const auto path = dir.path() / "rt.vec";
  save_embeddings(m, path);
  const EmbeddingModel back = load_embeddings(path);

  REQUIRE(back.vocab.size() == 50);
  CHECK(back.epoch_label == "rt");
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(back.vocab.token(i) == m.vocab.token(i));
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(back.vectors.at(i, j) == doctest::Approx(m.vectors.at(i, j)).epsilon(1e-6).scale(1.0));
    }
  }

  // a second roundtrip is byte-stable
  const auto path2 = dir.path() / "rt2.vec";
  save_embeddings(back, path2);
  std::ifstream f1(path), f2(path2);
  const std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(c1 == c2);
}

TEST_CASE("save_embeddings handles the empty model and bad tokens") {
  TempDir dir("embed_save");
  EmbeddingModel empty;
  empty.dim = 4;
  empty.vectors = Matrix(0, 4);
  save_embeddings(empty, dir.path() / "empty.vec");
  std::ifstream in(dir.path() / "empty.vec");
  std::string header;
  std::getline(in, header);
  CHECK(header == "0 4");

  EmbeddingModel bad;
  bad.dim = 1;
  bad.vectors = Matrix(1, 1);
  bad.vocab.push_back("has space", 0);
  CHECK_THROWS_AS(save_embeddings(bad, dir.path() / "bad.vec"), DataError);
}

TEST_CASE("unit_normalize scales rows and is idempotent") {
  EmbeddingModel m;
  m.dim = 2;
  m.vectors = Matrix(1, 2);
  m.vectors.at(0, 0) = 3.0;
  m.vectors.at(0, 1) = 4.0;
  m.vocab.push_back("w", 1);

  const EmbeddingModel n = unit_normalize(m);
  CHECK(n.normalized);
  CHECK(n.vectors.at(0, 0) == doctest::Approx(0.6));
  CHECK(n.vectors.at(0, 1) == doctest::Approx(0.8));

  const EmbeddingModel again = unit_normalize(n);
  CHECK(again.vectors == n.vectors);
}

TEST_CASE("unit_normalize names the offending zero row") {
  EmbeddingModel m;
  m.dim = 2;
  m.vectors = Matrix(2, 2);
  m.vectors.at(0, 0) = 1.0;
  m.vocab.push_back("fine", 1);
  m.vocab.push_back("empty_vec", 1);
  CHECK_THROWS_WITH_AS((void)unit_normalize(m), doctest::Contains("empty_vec"), DataError);
}

TEST_CASE("unit_normalize preserves cosine similarities") {
  const EmbeddingModel m = testhelpers::random_model(20, 5, 11);
  const EmbeddingModel n = unit_normalize(m);
  const auto raw = testhelpers::to_reference(m);
  for (std::size_t a = 0; a < 20; ++a) {
    for (std::size_t b = a + 1; b < 20; ++b) {
      const double before = reference::cosine(raw.rows[a], raw.rows[b]);
      const double after = shiftscan::kernels::dot(n.vectors.row(a), n.vectors.row(b), 5);
      CHECK(std::abs(before - after) < 1e-12);
    }
  }
}

TEST_CASE("neighbors: exhaustion and sign cases") {
  SUBCASE("V=2 returns the single other word") {
    EmbeddingModel m;
    m.dim = 2;
    m.vectors = Matrix(2, 2);
    m.vectors.at(0, 0) = 1.0;
    m.vectors.at(1, 1) = 1.0;
    m.vocab.push_back("w1", 1);
    m.vocab.push_back("w2", 1);
    const auto list = neighbors(unit_normalize(m), "w1", 5);
    REQUIRE(list.items.size() == 1);
    CHECK(list.items[0].first == "w2");
  }
  SUBCASE("negative similarity ranks last") {
    EmbeddingModel m;
    m.dim = 1;
    m.vectors = Matrix(3, 1);
    m.vectors.at(0, 0) = 1.0;
    m.vectors.at(1, 0) = 1.0;
    m.vectors.at(2, 0) = -1.0;
    m.vocab.push_back("w", 1);
    m.vocab.push_back("a", 1);
    m.vocab.push_back("b", 1);
    const auto list = neighbors(unit_normalize(m), "w", 2);
    REQUIRE(list.items.size() == 2);
    CHECK(list.items[0].first == "a");
    CHECK(list.items[0].second == doctest::Approx(1.0));
    CHECK(list.items[1].first == "b");
    CHECK(list.items[1].second == doctest::Approx(-1.0));
  }
  SUBCASE("unknown word and unnormalized model are errors") {
    EmbeddingModel m = testhelpers::random_model(3, 2, 1);
    CHECK_THROWS_AS((void)neighbors(m, "w0", 1), DataError);  // not normalized
    const EmbeddingModel n = unit_normalize(m);
    CHECK_THROWS_AS((void)neighbors(n, "nope", 1), DataError);
  }
}

TEST_CASE("neighbors matches the full-sort reference on a random 50x8 model") {
  const EmbeddingModel m = unit_normalize(testhelpers::random_model(50, 8, 23));
  const auto ref = testhelpers::to_reference(m);
  for (std::size_t i = 0; i < 50; ++i) {
    const std::string word = m.vocab.token(i);
    const auto fast = neighbors(m, word, 10);
    const auto slow = reference::top_neighbors(ref, word, 10);
    REQUIRE(fast.items.size() == slow.size());
    for (std::size_t k = 0; k < slow.size(); ++k) CHECK(fast.items[k].first == slow[k]);
    for (std::size_t k = 1; k < fast.items.size(); ++k) {
      CHECK(fast.items[k - 1].second >= fast.items[k].second);  // non-increasing
    }
  }
}

TEST_CASE("neighbor lists are invariant under a shared rotation (up to ties)") {
  const EmbeddingModel m = unit_normalize(testhelpers::random_model(40, 6, 31));
  const Matrix r = testhelpers::random_rotation(6, 77);
  const EmbeddingModel rotated = unit_normalize(testhelpers::rotate_model(m, r));
  for (std::size_t i = 0; i < 40; i += 7) {
    const auto before = neighbors(m, m.vocab.token(i), 8);
    const auto after = neighbors(rotated, m.vocab.token(i), 8);
    REQUIRE(before.items.size() == after.items.size());
    for (std::size_t k = 0; k < before.items.size(); ++k) {
      CHECK(before.items[k].first == after.items[k].first);
      CHECK(std::abs(before.items[k].second - after.items[k].second) < 1e-9);
    }
  }
}

TEST_CASE("neighbors are invariant under vocabulary relabeling") {
  const EmbeddingModel m = unit_normalize(testhelpers::random_model(30, 5, 37));
  // rebuild the model with rows in reversed vocabulary order
  EmbeddingModel reversed;
  reversed.dim = m.dim;
  reversed.vectors = Matrix(30, 5);
  for (std::size_t i = 0; i < 30; ++i) {
    const std::size_t src = 29 - i;
    reversed.vocab.push_back(m.vocab.token(src), 1);
    std::copy(m.vectors.row(src), m.vectors.row(src) + 5, reversed.vectors.row(i));
  }
  reversed.normalized = true;
  for (std::size_t i = 0; i < 30; i += 5) {
    const auto a = neighbors(m, m.vocab.token(i), 7);
    const auto b = neighbors(reversed, m.vocab.token(i), 7);
    REQUIRE(a.items.size() == b.items.size());
    for (std::size_t k = 0; k < a.items.size(); ++k) {
      CHECK(a.items[k].first == b.items[k].first);  // no exact ties in random data
    }
  }
}

TEST_CASE("common_vocab follows m1 order and is symmetric as a set") {
  EmbeddingModel m1, m2;
  m1.dim = m2.dim = 1;
  m1.vectors = Matrix(3, 1, 1.0);
  m2.vectors = Matrix(3, 1, 1.0);
  for (const auto* t : {"a", "b", "c"}) m1.vocab.push_back(t, 1);
  for (const auto* t : {"d", "c", "b"}) m2.vocab.push_back(t, 1);

  const auto inter = common_vocab(m1, m2);
  CHECK(inter == std::vector<std::string>{"b", "c"});
  const auto other = common_vocab(m2, m1);
  CHECK(other == std::vector<std::string>{"c", "b"});

  const EmbeddingModel full = testhelpers::random_model(10, 2, 3);
  CHECK(common_vocab(full, full).size() == 10);

  EmbeddingModel disjoint;
  disjoint.dim = 2;
  disjoint.vectors = Matrix(1, 2, 1.0);
  disjoint.vocab.push_back("zzz", 1);
  CHECK(common_vocab(full, disjoint).empty());
}

TEST_CASE("vocabulary rejects duplicates and keeps positions consistent") {
  Vocabulary v;
  v.push_back("x", 3);
  v.push_back("y", 1);
  CHECK_THROWS_AS(v.push_back("x", 2), DataError);
  CHECK(v.position("y") == 1);
  CHECK(!v.position("z"));
  CHECK(v.frequency(0) == 3);
}
