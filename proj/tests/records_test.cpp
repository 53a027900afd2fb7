#include "biasprompt/records.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biasprompt/errors.hpp"

namespace bp = biasprompt;
using nlohmann::json;

namespace {

bp::McqInstance sample_instance() {
    bp::McqInstance instance;
    instance.question_id = "rec-1";
    instance.dataset = bp::DatasetTag::csqa;
    instance.question = "Where is the fuse box usually mounted?";
    instance.options = {{'A', "in the basement"}, {'B', "on the roof"}, {'C', "in the mailbox"}};
    instance.gold_label = 'A';
    instance.ordering_id = 17;
    return instance;
}

bp::Prediction bias_prediction() {
    bp::Prediction prediction;
    prediction.question_id = "rec-1";
    prediction.strategy = bp::Strategy::bias;
    prediction.predicted_label = 'A';
    prediction.parse_status = bp::ParseStatus::placeholder;
    prediction.reasonings = bp::ReasoningSet{
        {'A', "Fuse boxes live near the service entrance."},
        {'B', "(no reasoning produced)"},
        {'C', "Mailboxes hold letters."},
    };
    prediction.sentinel_labels = {'B'};
    prediction.calls = {
        {bp::TemplateId::reasoning_gen, 20, 9, 3},
        {bp::TemplateId::reasoning_gen, 0, 0, 0},
        {bp::TemplateId::reasoning_gen, 21, 7, 2},
        {bp::TemplateId::consensus, 80, 5, 4},
    };
    prediction.raw_final_text = "So the answer is: A";
    return prediction;
}

TEST(MakeRecord, ScoresThePredictionAgainstGold) {
    const auto record = bp::make_record(sample_instance(), bias_prediction(), "test-model", 7);
    EXPECT_EQ(record.question_id, "rec-1");
    EXPECT_EQ(record.dataset, bp::DatasetTag::csqa);
    EXPECT_EQ(record.model, "test-model");
    EXPECT_EQ(record.strategy, bp::Strategy::bias);
    EXPECT_EQ(record.ordering_id, 17);
    EXPECT_EQ(record.seed, 7);
    EXPECT_EQ(record.gold_label, 'A');
    EXPECT_EQ(record.predicted_label, 'A');
    EXPECT_TRUE(record.correct);
    EXPECT_EQ(record.total_prompt_tokens(), 20 + 0 + 21 + 80);
    EXPECT_EQ(record.total_completion_tokens(), 9 + 0 + 7 + 5);
}

TEST(MakeRecord, WrongOrMissingPredictionsScoreIncorrect) {
    auto prediction = bias_prediction();
    prediction.predicted_label = 'B';
    EXPECT_FALSE(bp::make_record(sample_instance(), prediction, "m", 0).correct);

    prediction.predicted_label.reset();
    prediction.parse_status = bp::ParseStatus::failed;
    const auto record = bp::make_record(sample_instance(), prediction, "m", 0);
    EXPECT_FALSE(record.correct);
    EXPECT_FALSE(record.predicted_label.has_value());
}

TEST(MakeRecord, RejectsMismatchedQuestionIds) {
    auto prediction = bias_prediction();
    prediction.question_id = "other-question";
    EXPECT_THROW(bp::make_record(sample_instance(), prediction, "m", 0), bp::ContractError);
}

TEST(JsonLines, RoundTripPreservesEveryField) {
    const auto record = bp::make_record(sample_instance(), bias_prediction(), "test-model", 7);
    const auto line = bp::to_json_line(record);
    const auto parsed = bp::record_from_json_line(line);
    EXPECT_EQ(parsed, record);
}

TEST(JsonLines, RoundTripPreservesNullsAndOmissions) {
    bp::Prediction prediction;
    prediction.question_id = "rec-1";
    prediction.strategy = bp::Strategy::zero_shot;
    prediction.parse_status = bp::ParseStatus::failed;
    prediction.calls = {{bp::TemplateId::zero_shot, 12, 3, 1}};
    prediction.raw_final_text = "It depends.";
    const auto record = bp::make_record(sample_instance(), prediction, "test-model", 0);

    const auto line = bp::to_json_line(record);
    const json row = json::parse(line);
    EXPECT_TRUE(row["predicted_label"].is_null());
    EXPECT_TRUE(row["reasonings"].is_null());
    // No sentinels -> the key is omitted entirely.
    EXPECT_FALSE(row.contains("sentinel_labels"));

    const auto parsed = bp::record_from_json_line(line);
    EXPECT_EQ(parsed, record);
    EXPECT_FALSE(parsed.predicted_label.has_value());
    EXPECT_FALSE(parsed.reasonings.has_value());
    EXPECT_TRUE(parsed.sentinel_labels.empty());
}

TEST(JsonLines, SerializationIsByteDeterministic) {
    const auto record = bp::make_record(sample_instance(), bias_prediction(), "test-model", 7);
    const auto a = bp::to_json_line(record);
    const auto b = bp::to_json_line(record);
    EXPECT_EQ(a, b);
    // Keys come out in a fixed order, so equal records mean equal bytes.
    EXPECT_EQ(a.find("\"calls\""), std::size_t{1});
}

TEST(JsonLines, RejectsContradictoryCorrectFlags) {
    const auto record = bp::make_record(sample_instance(), bias_prediction(), "test-model", 7);
    json row = json::parse(bp::to_json_line(record));
    row["correct"] = false;  // prediction A == gold A, so this lies
    try {
        bp::record_from_json_line(row.dump());
        FAIL() << "expected IngestError";
    } catch (const bp::IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("contradicts"), std::string::npos);
    }
}

TEST(JsonLines, RejectsMalformedLines) {
    EXPECT_THROW(bp::record_from_json_line("{ not json"), bp::IngestError);
    EXPECT_THROW(bp::record_from_json_line("{}"), bp::IngestError);

    const auto record = bp::make_record(sample_instance(), bias_prediction(), "m", 0);
    json row = json::parse(bp::to_json_line(record));
    row["strategy"] = "mystery";
    EXPECT_THROW(bp::record_from_json_line(row.dump()), bp::IngestError);
    row = json::parse(bp::to_json_line(record));
    row["gold_label"] = "AA";
    EXPECT_THROW(bp::record_from_json_line(row.dump()), bp::IngestError);
    row = json::parse(bp::to_json_line(record));
    row.erase("raw_final_text");
    EXPECT_THROW(bp::record_from_json_line(row.dump()), bp::IngestError);
}

TEST(RecordFiles, WriteThenReadReturnsEqualRecords) {
    const auto path =
        std::filesystem::temp_directory_path() / "biasprompt_records_test_roundtrip.jsonl";
    std::vector<bp::EvalRecord> records;
    records.push_back(bp::make_record(sample_instance(), bias_prediction(), "test-model", 7));
    auto instance = sample_instance();
    instance.question_id = "rec-2";
    auto prediction = bias_prediction();
    prediction.question_id = "rec-2";
    prediction.predicted_label = 'C';
    records.push_back(bp::make_record(instance, prediction, "test-model", 7));

    bp::write_records(path, records);
    const auto loaded = bp::read_records(path);
    EXPECT_EQ(loaded, records);
    std::filesystem::remove(path);
}

TEST(RecordFiles, ReadErrorsCarryPathAndLine) {
    const auto path =
        std::filesystem::temp_directory_path() / "biasprompt_records_test_broken.jsonl";
    {
        std::vector<bp::EvalRecord> records = {
            bp::make_record(sample_instance(), bias_prediction(), "m", 0)};
        bp::write_records(path, records);
        std::ofstream out(path, std::ios::binary | std::ios::app);
        out << "{\"question_id\": 5}\n";
    }
    try {
        bp::read_records(path);
        FAIL() << "expected IngestError";
    } catch (const bp::IngestError& e) {
        EXPECT_NE(std::string(e.what()).find(path.string() + ":2"), std::string::npos);
    }
    std::filesystem::remove(path);

    EXPECT_THROW(bp::read_records(path / "definitely-missing.jsonl"), bp::IngestError);
}

}  // namespace
