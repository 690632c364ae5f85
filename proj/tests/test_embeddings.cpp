/* Copyright 2026 The dsae Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/embeddings.hpp"
#include "dsae/error.hpp"

using namespace dsae;
using namespace dsae::embeddings;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_static(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse_static reads vectors and folds case") {
  const auto s = parse_static("Zinc 1 2 3\nfish 0.5 -1 1e-3\nzinc 9 9 9\n");
  CHECK(s.table.dim() == 3);
  CHECK(s.table.size() == 2);
  CHECK(s.duplicate_warnings == 1);
  const auto z = s.table.lookup("ZINC");
  CHECK_FALSE(z.oov);
  CHECK(z.vector[0] == 1.0);  // first vector kept
  CHECK(z.vector[2] == 3.0);
  const auto miss = s.table.lookup("kava");
  CHECK(miss.oov);
  REQUIRE(miss.vector.size() == 3);
  for (double v : miss.vector) CHECK(v == 0.0);
}

TEST_CASE("parse_static header and errors") {
  const auto h = parse_static("2 2\na 1 2\nb 3 4\n");
  CHECK(h.table.dim() == 2);
  CHECK(h.table.size() == 2);
  CHECK(error_line("a 1 2\nb 3\n") == 2);
  CHECK(error_line("a 1 2\nb 3 x\n") == 2);
  CHECK(error_line("a 1 2\nb 3 4\n") == 0);
  CHECK_THROWS_AS(load_static("/nonexistent/vectors.txt"), IoError);
}

TEST_CASE("to_text round trips exactly") {
  EmbeddingTable t(3);
  const std::vector<double> a = {0.1, -1.0 / 3.0, 1e-300};
  const std::vector<double> b = {123456.789, 0.0, -2.5};
  CHECK(t.add("alpha", a));
  CHECK(t.add("beta", b));
  CHECK_FALSE(t.add("ALPHA", b));
  CHECK_THROWS_AS(t.add("gamma", std::vector<double>{1.0}), InvalidArgument);
  const auto back = parse_static(t.to_text()).table;
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.lookup("alpha").vector[i] == a[i]);
    CHECK(back.lookup("beta").vector[i] == b[i]);
  }
}

TEST_CASE("StaticVectors rows and OOV flags") {
  const auto s = parse_static("fish 1 0\noil 0 1\n");
  StaticVectors sv(s.table);
  const auto doc = normalize::normalize("d", "Fish oil rocks");
  const auto m = sv.vectors(doc);
  CHECK(m.rows == 3);
  CHECK(m.cols == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 1.0);
  CHECK(m(2, 0) == 0.0);
  CHECK(sv.oov_flags(doc) == std::vector<bool>{false, false, true});
  CHECK(sv.oov_rate(doc) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("contextual vectors") {
  const auto p = parse_contextual(
      "{\"doc_id\":\"d\",\"token_index\":0,\"vector\":[1,2]}\n"
      "{\"doc_id\":\"d\",\"token_index\":1,\"vector\":[3,4]}\n");
  CHECK(p.dim() == 2);
  CHECK(p.doc_length("d") == 2);
  CHECK(p.get("d", 1)[0] == 3.0);
  p.check_coverage();
  try {
    p.get("d", 5);
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("d") != std::string::npos);
    CHECK(msg.find("5") != std::string::npos);
  }
  CHECK_THROWS_AS(p.get("zz", 0), InvalidArgument);

  ContextualVectors cv(p);
  const auto m = cv.vectors(normalize::normalize("d", "fish oil"));
  CHECK(m.rows == 2);
  CHECK(m(1, 1) == 4.0);
  CHECK_THROWS_AS(cv.vectors(normalize::normalize("d", "fish oil pills")), InvalidArgument);

  ContextualProvider gap;
  gap.add("d", 0, {1.0});
  gap.add("d", 2, {1.0});
  CHECK_THROWS(gap.check_coverage());
  CHECK_THROWS(parse_contextual("{\"doc_id\":\"d\",\"token_index\":0,\"vector\":[1,2]}\n"
                                "{\"doc_id\":\"d\",\"token_index\":1,\"vector\":[3]}\n"));
}
