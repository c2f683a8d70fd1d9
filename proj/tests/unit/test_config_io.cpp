#include <gtest/gtest.h>

#include <fstream>

#include "farf/config.hpp"
#include "farf/error.hpp"
#include "farf/kv.hpp"
#include "farf/model_io.hpp"
#include "farf/pipeline.hpp"
#include "fixtures.hpp"

namespace farf {
namespace {

TEST(Kv, ParseAndFormat) {
  const KeyValues kv = parse_kv("# comment\n a = 1 \n\nb=two words\r\nc=\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1].second, "two words");
  EXPECT_EQ(kv[2].second, "");
  EXPECT_EQ(format_kv(kv), "a=1\nb=two words\nc=\n");
  EXPECT_THROW(parse_kv("novalue\n"), InvalidArgument);
  EXPECT_THROW(parse_kv("=3\n"), InvalidArgument);
}

TEST(Kv, NumbersRoundTrip) {
  for (double v : {0.01, 1.0 / 3.0, 1e-300, -2.5e17, 0.6}) {
    EXPECT_EQ(parse_double("k", format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.01), "0.01");
  EXPECT_THROW(parse_double("k", "1.5x"), InvalidArgument);
  EXPECT_THROW(parse_double("k", "nan"), InvalidArgument);
  EXPECT_THROW(parse_int("k", "3.5"), InvalidArgument);
  EXPECT_THROW(parse_uint("k", "-1"), InvalidArgument);
  EXPECT_TRUE(parse_bool("k", "on"));
  EXPECT_FALSE(parse_bool("k", "0"));
  EXPECT_THROW(parse_bool("k", "maybe"), InvalidArgument);
}

TEST(Config, TextRoundTripCoversEveryField) {
  SRConfig c = preset("FARF*");
  c.seed = 12345;
  c.leaf.gwrr.lambda_base = 0.037;
  c.forest.min_leaf = 80;
  c.max_train_samples = 777;
  const SRConfig back = SRConfig::from_text(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.seed, 12345u);
  EXPECT_EQ(back.leaf.gwrr.lambda_base, 0.037);
  EXPECT_EQ(c.to_kv().size(), config_fields().size());
}

TEST(Config, UnknownKeyAndBadValuesRejected) {
  SRConfig c;
  EXPECT_THROW(c.set("no_such_key", "1"), InvalidArgument);
  EXPECT_THROW(c.set("projection", "ica"), InvalidArgument);
  EXPECT_THROW(c.set("scale", "three"), InvalidArgument);
  c.set("scale", "5");
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = SRConfig{};
  c.set("projection_dim", "300");
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Config, PresetVocabulary) {
  const SRConfig rf = preset("RF"), rfp = preset("RF+"), rfs = preset("RF#");
  const SRConfig farf = preset("FARF"), star = preset("FARF*");
  EXPECT_FALSE(rf.use_magnitudes);
  EXPECT_EQ(rf.leaf.features, LeafFeatures::compressed);
  EXPECT_TRUE(rfp.use_magnitudes);
  EXPECT_EQ(rfp.leaf.features, LeafFeatures::compressed);
  EXPECT_FALSE(rfs.use_magnitudes);
  EXPECT_EQ(rfs.leaf.features, LeafFeatures::original);
  EXPECT_TRUE(farf.use_magnitudes);
  EXPECT_EQ(farf.leaf.features, LeafFeatures::original);
  EXPECT_EQ(farf.projection, ProjectionKind::pca);
  EXPECT_EQ(farf.coarse, CoarseEstimator::bicubic);
  EXPECT_EQ(farf.forest.n_trees, 10);
  EXPECT_EQ(farf.forest.max_depth, 15);
  EXPECT_EQ(star.projection, ProjectionKind::lsh);
  EXPECT_EQ(star.coarse, CoarseEstimator::ibp);
  EXPECT_EQ(star.forest.n_trees, 45);
  EXPECT_THROW(preset("XYZ"), InvalidArgument);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset(name).validate());
}

TEST(Config, PresetKeyAppliesFirst) {
  SRConfig c;
  c.apply({{"n_trees", "3"}, {"preset", "RF"}});
  EXPECT_EQ(c.preset, "RF");
  EXPECT_EQ(c.forest.n_trees, 3);
  EXPECT_FALSE(c.use_magnitudes);
}

TrainedModel tiny_model(const std::string& preset_name) {
  SRConfig cfg = preset(preset_name);
  cfg.forest.n_trees = 2;
  cfg.forest.max_depth = 4;
  cfg.forest.min_leaf = 16;
  cfg.projection_dim = 8;
  cfg.projection_fit_samples = 2000;
  cfg.ibp.iterations = 3;
  std::vector<ImagePlane> imgs;
  for (int i = 0; i < 2; ++i) imgs.push_back(testing::scene_plane(45, 39, 50 + i));
  return train(imgs, cfg);
}

TEST(ModelIo, RoundTripIsExact) {
  for (const char* name : {"FARF", "RF", "FARF*"}) {
    const TrainedModel m = tiny_model(name);
    const std::string bytes = serialize_model(m);
    const TrainedModel back = deserialize_model(bytes);
    EXPECT_EQ(serialize_model(back), bytes);
    EXPECT_EQ(back.config.to_text(), m.config.to_text());
    EXPECT_EQ(back.projection.matrix, m.projection.matrix);
    ASSERT_EQ(back.forest.trees.size(), m.forest.trees.size());
  }
}

TEST(ModelIo, DetectsCorruption) {
  const std::string bytes = serialize_model(tiny_model("FARF"));
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  try {
    deserialize_model(flipped);
    FAIL() << "corruption not detected";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos);
  }
  EXPECT_THROW(deserialize_model(bytes.substr(0, bytes.size() - 9)), IoError);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(deserialize_model(magic), IoError);
  EXPECT_THROW(deserialize_model(""), IoError);
}

TEST(ModelIo, FileRoundTrip) {
  testing::TempDir dir("model");
  const TrainedModel m = tiny_model("FARF");
  save_model(dir / "m.farf", m);
  EXPECT_EQ(serialize_model(load_model(dir / "m.farf")), serialize_model(m));
  EXPECT_THROW(load_model(dir / "missing.farf"), IoError);
}

TEST(ModelIo, HeaderLayout) {
  const std::string bytes = serialize_model(tiny_model("RF"));
  EXPECT_EQ(bytes.substr(0, 4), "FARF");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), kModelFormatVersion);
  EXPECT_EQ(bytes.substr(8, 4), "CONF");
}

}  // namespace
}  // namespace farf
