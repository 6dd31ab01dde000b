#include <catch2/catch_amalgamated.hpp>

#include "gpcover/io.hpp"

using namespace gpcover;
using nlohmann::json;

TEST_CASE("group files: permutation, cayley, family") {
  json perm = {{"kind", "permutation"},
               {"degree", 3},
               {"generators", {{{1, 2}}, {{1, 2, 3}}}}};
  GroupTable s3 = parse_group(perm);
  CHECK(s3.order() == 6);

  json cay = {{"kind", "cayley"},
              {"table", {{0, 1}, {1, 0}}}};
  CHECK(parse_group(cay).order() == 2);

  json fam = {{"kind", "family"}, {"family", "psl2"}, {"q", 7}};
  CHECK(parse_group(fam).order() == 168);
  json fam_n = {{"kind", "family"}, {"family", "alt"}, {"n", 5}};
  CHECK(parse_group(fam_n).order() == 60);

  CHECK_THROWS_AS(parse_group(json{{"kind", "martian"}}), InputError);
  CHECK_THROWS_AS(parse_group(json{{"degree", 3}}), InputError);
  CHECK_THROWS_AS(parse_group(json::array()), InputError);
  CHECK_THROWS_AS(
      parse_group(json{{"kind", "family"}, {"family", "psl2"}}), InputError);
}

TEST_CASE("group files round-trip through disk") {
  json fam = {{"kind", "family"}, {"family", "sym"}, {"n", 4}};
  write_text_file("/tmp/gpcover_test_group.json", fam.dump());
  GroupTable g = load_group("/tmp/gpcover_test_group.json");
  CHECK(g.order() == 24);
  CHECK_THROWS_AS(load_group("/tmp/gpcover_no_such_file.json"), InputError);
  write_text_file("/tmp/gpcover_bad.json", "{not json");
  CHECK_THROWS_AS(load_group("/tmp/gpcover_bad.json"), InputError);
}

TEST_CASE("subset specs") {
  GroupTable g = build_family(Family::alt, 5);
  ClassSpectrum sp = conjugacy_classes(g);

  Subset idx = parse_subset(json{{"kind", "indices"}, {"ids", {0, 2, 5}}}, g);
  CHECK(idx.elements() == std::vector<ElementId>{0, 2, 5});

  Subset cls = parse_subset(
      json{{"kind", "class"}, {"rep", sp.classes[1].rep}}, g, &sp);
  CHECK(cls == sp.classes[1].members);
  CHECK_THROWS_AS(
      parse_subset(json{{"kind", "class"}, {"rep", 1}}, g, nullptr),
      InputError);

  Subset rnd =
      parse_subset(json{{"kind", "random"}, {"size", 9}, {"seed", 42}}, g);
  CHECK(rnd == random_subset(g, 9, 42));

  json ballspec = {{"kind", "ball"},
                   {"gens", {g.generators()[0], g.generators()[1]}},
                   {"radius", 2}};
  Subset bl = parse_subset(ballspec, g);
  CHECK(bl == ball(g, {g.generators()[0], g.generators()[1]}, 2));

  CHECK_THROWS_AS(parse_subset(json{{"kind", "indices"}}, g), InputError);
  CHECK_THROWS_AS(parse_subset(json{{"kind", "nope"}}, g), InputError);
  CHECK_THROWS_AS(
      parse_subset(json{{"kind", "class"}, {"rep", 999}}, g, &sp), InputError);
}

TEST_CASE("sets files accept a wrapped object or a bare array") {
  GroupTable g = build_family(Family::sym, 3);
  json spec = {{"kind", "random"}, {"size", 3}, {"seed", 1}};
  json wrapped = {{"sets", {spec, spec}}};
  auto a = parse_sets(wrapped, g);
  CHECK(a.size() == 2);
  auto b = parse_sets(json::array({spec, spec}), g);
  CHECK(b.size() == 2);
  CHECK(a[0] == b[0]);
  CHECK_THROWS_AS(parse_sets(json{{"sets", json::array()}}, g), InputError);
}

TEST_CASE("pipeline config serialization round-trips") {
  PipelineConfig c = PipelineConfig::for_rank(2);
  c.eta = 0.07;
  c.seed = 99;
  c.candidate_cap = 4096;
  json j = config_to_json(c);
  PipelineConfig d = parse_config(j);
  CHECK(d.rank == 2);
  CHECK(d.zeta.num == c.zeta.num);
  CHECK(d.zeta.den == c.zeta.den);
  CHECK(d.delta.num == c.delta.num);
  CHECK(d.eta == c.eta);
  CHECK(d.seed == 99);
  CHECK(d.candidate_cap == 4096);

  // Defaults fill in for an empty object.
  PipelineConfig def = parse_config(json::object());
  CHECK(def.rank == 1);
  CHECK(def.zeta.den == 32);

  CHECK_THROWS_AS(parse_config(json{{"zeta", {{"num", 0}, {"den", 32}}}}),
                  InputError);
  CHECK_THROWS_AS(parse_config(json{{"candidate_cap", 0}}), InputError);
}

TEST_CASE("certificate serialization round-trips and rejects bad shapes") {
  CoverCertificate c;
  c.conjugators = {0, 5, 3};
  c.trace = {{Phase::small, 0, 1, 4}, {Phase::gowers, 0, 2, 60}};
  c.final_size = 60;
  c.covered = true;
  json j = certificate_to_json(c);
  CHECK(j.at("covered") == true);
  CHECK(j.at("trace")[0].at("phase") == "small");
  CHECK(j.at("trace")[0].at("range") == json::array({0, 1}));

  CoverCertificate d = certificate_from_json(j);
  CHECK(d.conjugators == c.conjugators);
  REQUIRE(d.trace.size() == 2);
  CHECK(d.trace[1].phase == Phase::gowers);
  CHECK(d.trace[1].lo == 0);
  CHECK(d.trace[1].hi == 2);
  CHECK(d.trace[1].size == 60);
  CHECK(d.final_size == 60);
  CHECK(d.covered);

  json bad = j;
  bad["trace"][0]["range"] = json::array({1});
  CHECK_THROWS_AS(certificate_from_json(bad), InputError);
  json bad2 = j;
  bad2["trace"][0]["phase"] = "warp";
  CHECK_THROWS_AS(certificate_from_json(bad2), InputError);
  CHECK_THROWS_AS(certificate_from_json(json::object()), InputError);
}

TEST_CASE("report envelope carries run metadata") {
  GroupTable g = build_family(Family::alt, 5);
  json cfg = config_to_json(PipelineConfig::for_rank(1));
  json env = report_envelope(g, cfg);
  CHECK(env.at("schema") == "gpcover/1");
  CHECK(env.at("version") == kToolVersion);
  CHECK(env.at("config") == cfg);
  CHECK(env.at("group").at("order") == 60);
  CHECK(env.at("group").at("fingerprint") == g.fingerprint());
  CHECK_FALSE(env.at("timestamp").get<std::string>().empty());
  // Identical inputs give identical envelopes apart from the timestamp.
  json env2 = report_envelope(g, cfg);
  env.erase("timestamp");
  env2.erase("timestamp");
  CHECK(env == env2);
}

TEST_CASE("csv emission quotes only what needs quoting") {
  std::string csv = to_csv({"a", "b"}, {{"1", "2"}, {"x,y", "he said \"hi\""}});
  CHECK(csv ==
        "a,b\n"
        "1,2\n"
        "\"x,y\",\"he said \"\"hi\"\"\"\n");
}
