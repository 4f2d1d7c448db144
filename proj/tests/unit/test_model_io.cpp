#include <doctest.h>

#include <cstring>
#include <limits>
#include <sstream>

#include "gepd/error.hpp"
#include "gepd/model_io.hpp"
#include "oracles.hpp"

using namespace gepd;

namespace {

ModelParams awkward_params() {
  ModelConfig c;
  c.hidden_dim = 3;
  c.num_layers = 1;
  c.head_hidden = 2;
  c.attention = false;
  c.symmetric_head = true;
  ModelParams p = init_params(c, 12);
  p.values[0] = 1.0 / 3.0;
  p.values[1] = -0.0;
  p.values[2] = std::numeric_limits<double>::denorm_min();
  p.values[3] = 1e308;
  return p;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("text and binary model files round trip bit for bit") {
  const ModelParams p = awkward_params();
  for (bool binary : {false, true}) {
    std::stringstream buf;
    if (binary) write_model_binary(buf, p, {"seed 12", "second line"});
    else write_model_text(buf, p, {"seed 12"});
    const ModelParams back = read_model(buf);
    CHECK(back.config == p.config);
    CHECK(bit_equal(back.values, p.values));
  }
  oracle::TempDir dir("model");
  write_model(dir / "m.bin", p);
  write_model(dir / "m.txt", p);
  CHECK(oracle::read_file(dir / "m.bin").rfind("GEPDMODL", 0) == 0);
  CHECK(oracle::read_file(dir / "m.txt").rfind("gepd-model 1\n", 0) == 0);
  CHECK(bit_equal(read_model(dir / "m.bin").values, p.values));
  CHECK(bit_equal(read_model(dir / "m.txt").values, p.values));
  CHECK_THROWS_AS(read_model(dir / "missing.txt"), DataError);
}

TEST_CASE("malformed model files") {
  const ModelParams p = awkward_params();
  std::ostringstream text;
  write_model_text(text, p);
  std::string s = text.str();
  {
    std::string wrong = s;
    wrong.replace(wrong.find("count "), 6 + std::to_string(p.values.size()).size(), "count 3");
    std::istringstream in(wrong);
    CHECK_THROWS_AS(read_model(in), DataError);
  }
  {
    std::istringstream in(s.substr(0, s.size() - 30));
    CHECK_THROWS_AS(read_model(in), DataError);
  }
  {
    std::istringstream in("not a model\n");
    CHECK_THROWS_AS(read_model(in), DataError);
  }
  std::ostringstream bin;
  write_model_binary(bin, p);
  {
    std::istringstream in(bin.str().substr(0, bin.str().size() - 5));
    CHECK_THROWS_AS(read_model(in), DataError);
  }
}
