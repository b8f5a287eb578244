#include "mural/dataset.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "mural/errors.hpp"
#include "mural/state.hpp"
#include "test_util.hpp"

namespace mural {
namespace {

using ::mural::testing::TempDir;
using ::mural::testing::make_dataset;
using ::mural::testing::make_image;
using ::mural::testing::make_object;
using ::mural::testing::write_text;
using ::testing::HasSubstr;

TEST(VocabularyTest, RemapsSourceIdsInAscendingOrder) {
  ClassVocabulary vocab({{7, "truck"}, {1, "person"}, {3, "car"}});
  ASSERT_EQ(vocab.size(), 3);
  EXPECT_EQ(vocab.name(0), "person");
  EXPECT_EQ(vocab.name(1), "car");
  EXPECT_EQ(vocab.name(2), "truck");
  EXPECT_EQ(vocab.source_id(0), 1);
  EXPECT_EQ(vocab.source_id(2), 7);
  EXPECT_EQ(vocab.from_source(3), std::optional<int>(1));
  EXPECT_EQ(vocab.from_source(99), std::nullopt);
}

TEST(DatasetLoadTest, MinimalFile) {
  TempDir dir;
  write_text(dir.file("data.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 5, "image_id": 10, "category_id": 1,
                     "bbox": [10, 10, 20, 15]}]
  })");
  const Dataset dataset = load_dataset(dir.file("data.json"));
  ASSERT_EQ(dataset.vocab().size(), 1);
  EXPECT_EQ(dataset.vocab().name(0), "car");
  ASSERT_EQ(dataset.images().size(), 1u);
  const ImageRecord& image = dataset.images()[0];
  EXPECT_EQ(image.image_id, 10);
  EXPECT_DOUBLE_EQ(image.width, 100.0);
  ASSERT_EQ(image.objects.size(), 1u);
  EXPECT_EQ(image.objects[0].object_id, 5);
  EXPECT_EQ(image.objects[0].class_id, 0);
  EXPECT_EQ(image.objects[0].box, (BBox{10, 10, 20, 15}));
  EXPECT_EQ(dataset.total_objects(), 1);
}

TEST(DatasetLoadTest, EightClassVocabulary) {
  TempDir dir;
  write_text(dir.file("data.json"), R"({
    "categories": [
      {"id": 24, "name": "person"}, {"id": 25, "name": "rider"},
      {"id": 26, "name": "car"}, {"id": 27, "name": "truck"},
      {"id": 28, "name": "bus"}, {"id": 31, "name": "train"},
      {"id": 32, "name": "motorcycle"}, {"id": 33, "name": "bicycle"}],
    "images": [{"id": 1, "width": 2048, "height": 1024}],
    "annotations": []
  })");
  const Dataset dataset = load_dataset(dir.file("data.json"));
  ASSERT_EQ(dataset.vocab().size(), 8);
  EXPECT_EQ(dataset.vocab().name(0), "person");
  EXPECT_EQ(dataset.vocab().name(7), "bicycle");
  EXPECT_EQ(dataset.vocab().from_source(26), std::optional<int>(2));
}

TEST(DatasetLoadTest, DuplicateObjectIdNamesTheId) {
  TempDir dir;
  write_text(dir.file("data.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [
      {"id": 42, "image_id": 10, "category_id": 1, "bbox": [0, 0, 5, 5]},
      {"id": 42, "image_id": 10, "category_id": 1, "bbox": [20, 20, 5, 5]}]
  })");
  try {
    load_dataset(dir.file("data.json"));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr("42"));
  }
}

TEST(DatasetLoadTest, SchemaViolationsNameTheRecord) {
  TempDir dir;
  write_text(dir.file("missing_bbox.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 7, "image_id": 10, "category_id": 1}]
  })");
  try {
    load_dataset(dir.file("missing_bbox.json"));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr("bbox"));
    EXPECT_THAT(e.what(), HasSubstr("7"));
  }

  write_text(dir.file("bad_image.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 7, "image_id": 99, "category_id": 1,
                     "bbox": [0, 0, 5, 5]}]
  })");
  try {
    load_dataset(dir.file("bad_image.json"));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr("unknown image id=99"));
  }

  write_text(dir.file("bad_category.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 7, "image_id": 10, "category_id": 3,
                     "bbox": [0, 0, 5, 5]}]
  })");
  EXPECT_THROW(load_dataset(dir.file("bad_category.json")), InputError);

  write_text(dir.file("degenerate.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 7, "image_id": 10, "category_id": 1,
                     "bbox": [0, 0, 0, 5]}]
  })");
  EXPECT_THROW(load_dataset(dir.file("degenerate.json")), InputError);

  write_text(dir.file("outside.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 7, "image_id": 10, "category_id": 1,
                     "bbox": [200, 200, 5, 5]}]
  })");
  EXPECT_THROW(load_dataset(dir.file("outside.json")), InputError);
}

TEST(DatasetLoadTest, BoxesClippedToImageBounds) {
  TempDir dir;
  write_text(dir.file("data.json"), R"({
    "categories": [{"id": 1, "name": "car"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": [{"id": 5, "image_id": 10, "category_id": 1,
                     "bbox": [90, 40, 20, 20]}]
  })");
  const Dataset dataset = load_dataset(dir.file("data.json"));
  EXPECT_EQ(dataset.images()[0].objects[0].box, (BBox{90, 40, 10, 10}));
}

TEST(DatasetLoadTest, MissingAndMalformedFiles) {
  TempDir dir;
  EXPECT_THROW(load_dataset(dir.file("nope.json")), InputError);
  write_text(dir.file("garbage.json"), "{not json");
  EXPECT_THROW(load_dataset(dir.file("garbage.json")), InputError);
  write_text(dir.file("array.json"), "[]");
  EXPECT_THROW(load_dataset(dir.file("array.json")), InputError);
}

TEST(DatasetRoundTripTest, WriteThenLoadPreservesEverything) {
  Dataset dataset = make_dataset(
      3, {make_image(1, 200, 100,
                     {make_object(10, 1, BBox{5, 5, 20, 20}, 0),
                      make_object(11, 1, BBox{50, 30, 40, 25}, 2)}),
          make_image(2, 300, 150, {make_object(12, 2, BBox{0, 0, 10, 10}, 1)}),
          make_image(3, 50, 50)});
  TempDir dir;
  write_dataset(dir.file("out.json"), dataset);
  const Dataset reloaded = load_dataset(dir.file("out.json"));
  ASSERT_EQ(reloaded.images().size(), 3u);
  EXPECT_EQ(reloaded.vocab().size(), 3);
  EXPECT_EQ(reloaded.vocab().name(2), "c2");
  EXPECT_EQ(reloaded.images()[0].objects[1].box, (BBox{50, 30, 40, 25}));
  EXPECT_EQ(reloaded.images()[0].objects[1].class_id, 2);
  EXPECT_EQ(reloaded.total_objects(), 3);
  EXPECT_EQ(reloaded.class_totals(), (std::vector<int64_t>{1, 1, 1}));
}

TEST(DatasetIndexTest, FindImageAndObject) {
  const Dataset dataset = make_dataset(
      2, {make_image(7, 100, 100, {make_object(3, 7, BBox{1, 1, 5, 5}, 1)})});
  ASSERT_NE(dataset.find_image(7), nullptr);
  EXPECT_EQ(dataset.find_image(7)->image_id, 7);
  EXPECT_EQ(dataset.find_image(8), nullptr);
  ASSERT_NE(dataset.find_object(3), nullptr);
  EXPECT_EQ(dataset.find_object(3)->class_id, 1);
  EXPECT_EQ(dataset.find_object(4), nullptr);
}

TEST(PredictionsLoadTest, ValidAndInvalid) {
  TempDir dir;
  write_text(dir.file("data.json"), R"({
    "categories": [{"id": 3, "name": "car"}, {"id": 9, "name": "person"}],
    "images": [{"id": 10, "width": 100, "height": 50}],
    "annotations": []
  })");
  const Dataset dataset = load_dataset(dir.file("data.json"));

  write_text(dir.file("preds.json"), R"([
    {"image_id": 10, "category_id": 9, "bbox": [1, 2, 3, 4], "score": 0.75}
  ])");
  const auto preds = load_predictions(dir.file("preds.json"), dataset);
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].image_id, 10);
  EXPECT_EQ(preds[0].class_id, 1);  // source id 9 is the second dense class
  EXPECT_DOUBLE_EQ(preds[0].confidence, 0.75);
  EXPECT_FALSE(preds[0].matched_gt.has_value());

  write_text(dir.file("bad_image.json"),
             R"([{"image_id": 99, "category_id": 3, "bbox": [1, 2, 3, 4],
                  "score": 0.5}])");
  EXPECT_THROW(load_predictions(dir.file("bad_image.json"), dataset),
               InputError);

  write_text(dir.file("bad_cat.json"),
             R"([{"image_id": 10, "category_id": 4, "bbox": [1, 2, 3, 4],
                  "score": 0.5}])");
  EXPECT_THROW(load_predictions(dir.file("bad_cat.json"), dataset),
               InputError);

  write_text(dir.file("bad_score.json"),
             R"([{"image_id": 10, "category_id": 3, "bbox": [1, 2, 3, 4],
                  "score": 1.5}])");
  EXPECT_THROW(load_predictions(dir.file("bad_score.json"), dataset),
               InputError);
}

TEST(StateRoundTripTest, EmptyAndPopulated) {
  TempDir dir;
  DatasetState empty;
  save_state(empty, dir.file("empty.json"));
  EXPECT_EQ(load_state(dir.file("empty.json")), empty);

  DatasetState state;
  state.cycle_index = 3;
  state.labeled_objects[10] = BBox{1, 2, 3, 4};
  state.labeled_objects[11] = BBox{0, 0, 9, 9};
  state.labeled_regions.push_back(LabeledRegion{1, BBox{0, 0, 100, 50}, -1});
  state.labeled_regions.push_back(LabeledRegion{2, BBox{10, 10, 64, 64}, 2});
  state.unlabeled_images = {2, 5, 9};
  save_state(state, dir.file("state.json"));
  EXPECT_EQ(load_state(dir.file("state.json")), state);
}

TEST(StateLoadTest, RejectsCorruptAndWrongVersion) {
  TempDir dir;
  write_text(dir.file("corrupt.json"), "{\"version\": 1,");
  EXPECT_THROW(load_state(dir.file("corrupt.json")), InputError);
  write_text(dir.file("wrong_version.json"),
             R"({"version": 99, "cycle_index": 0, "labeled_objects": [],
                 "labeled_regions": [], "unlabeled_images": []})");
  EXPECT_THROW(load_state(dir.file("wrong_version.json")), InputError);
  write_text(dir.file("list.json"), "[]");
  EXPECT_THROW(load_state(dir.file("list.json")), InputError);
}

TEST(StateCountsTest, LabeledClassCounts) {
  const Dataset dataset = make_dataset(
      3, {make_image(1, 100, 100,
                     {make_object(10, 1, BBox{0, 0, 5, 5}, 0),
                      make_object(11, 1, BBox{10, 10, 5, 5}, 2),
                      make_object(12, 1, BBox{20, 20, 5, 5}, 2)})});
  DatasetState state;
  state.labeled_objects[11] = BBox{0, 0, 5, 5};
  state.labeled_objects[12] = BBox{0, 0, 5, 5};
  EXPECT_EQ(labeled_class_counts(state, dataset),
            (std::vector<int64_t>{0, 0, 2}));
  state.labeled_objects[99] = BBox{0, 0, 1, 1};
  EXPECT_THROW(labeled_class_counts(state, dataset), InputError);
}

TEST(DatasetWriteTest, DeterministicBytes) {
  const Dataset dataset = make_dataset(
      2, {make_image(1, 100, 100, {make_object(10, 1, BBox{0, 0, 5, 5}, 1)})});
  TempDir dir;
  write_dataset(dir.file("a.json"), dataset);
  write_dataset(dir.file("b.json"), dataset);
  EXPECT_EQ(mural::testing::read_text(dir.file("a.json")),
            mural::testing::read_text(dir.file("b.json")));
}

}  // namespace
}  // namespace mural
