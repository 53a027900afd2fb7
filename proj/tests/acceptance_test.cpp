// End-to-end acceptance suite.  Each test checks one release criterion and
// prints a single PASS/FAIL line, so a run of this binary doubles as a
// sign-off checklist.  Everything except the final live-endpoint smoke test
// runs offline against scripted backends and the shipped fixtures.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <sys/wait.h>

#include "biasprompt/dataset.hpp"
#include "biasprompt/evaluation.hpp"
#include "biasprompt/hash.hpp"
#include "biasprompt/http_backend.hpp"
#include "biasprompt/mcq.hpp"
#include "biasprompt/mock_backend.hpp"
#include "biasprompt/prompts.hpp"
#include "biasprompt/records.hpp"
#include "biasprompt/strategy.hpp"

namespace bp = biasprompt;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Prints the criterion verdict when the test body finishes, pass or fail,
// so the checklist stays complete even when an ASSERT bails out early.
struct CriterionLine {
    int number;
    const char* label;
    ~CriterionLine() {
        std::cout << "criterion " << number << " (" << label << "): "
                  << (::testing::Test::HasFailure() ? "FAIL" : "PASS") << std::endl;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

class Acceptance : public ::testing::Test {
protected:
    static fs::path dir() {
        static const fs::path d = [] {
            auto path = fs::temp_directory_path() / "biasprompt_acceptance";
            fs::remove_all(path);
            fs::create_directories(path);
            return path;
        }();
        return d;
    }

    static std::string cli() { return BIASPROMPT_CLI_PATH; }
    static std::string mockgen() { return BIASPROMPT_MOCKGEN_PATH; }
    static fs::path shipped(const char* name) {
        return fs::path(BIASPROMPT_SHIPPED_FIXTURE_DIR) / name;
    }

    static CommandResult run_command(const std::string& command) {
        static int counter = 0;
        const fs::path capture = dir() / ("capture_" + std::to_string(counter++) + ".txt");
        const std::string full = command + " >" + capture.string() + " 2>&1";
        const int status = std::system(full.c_str());
        CommandResult result;
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.output = read_file(capture);
        return result;
    }
};

// ---- canonical example, shared by the prompt-fidelity criterion ----------

const char* kCanonicalQuestion =
    "A revolving door is convenient for two direction travel, but it also serves as a "
    "security measure at a what?";

bp::McqInstance canonical_instance() {
    bp::McqInstance instance;
    instance.question_id = "canonical-1";
    instance.dataset = bp::DatasetTag::csqa;
    instance.question = kCanonicalQuestion;
    instance.options = {{'A', "bank"},
                        {'B', "library"},
                        {'C', "department store"},
                        {'D', "mall"},
                        {'E', "new york"}};
    instance.gold_label = 'A';
    return instance;
}

bp::ReasoningSet canonical_reasonings() {
    return {
        {'A',
         "The answer is 'bank'. Revolving doors are often used in banks to control the flow "
         "of people entering and exiting."},
        {'B',
         "The answer is 'library'. Revolving doors are commonly used in libraries to control "
         "the flow of people entering and exiting."},
        {'C',
         "The answer is department store. Revolving doors are commonly used in department "
         "stores to control the flow of customers."},
        {'D',
         "The answer is 'mall'. Revolving doors are commonly found in malls to control "
         "pedestrian traffic flow and prevent congestion."},
        {'E',
         "The answer is New York. The revolving door is a security measure at the Empire "
         "State Building in New York City."},
    };
}

const char* kConsensusBody =
    "### Question: A revolving door is convenient for two direction travel, but it also "
    "serves as a security measure at a what?\n"
    "### Answer choices: A. bank | B. library | C. department store | D. mall | E. new york\n"
    "### Reasoning for answer choice A: The answer is 'bank'. Revolving doors are often used "
    "in banks to control the flow of people entering and exiting.\n"
    "### Reasoning for answer choice B: The answer is 'library'. Revolving doors are "
    "commonly used in libraries to control the flow of people entering and exiting.\n"
    "### Reasoning for answer choice C: The answer is department store. Revolving doors are "
    "commonly used in department stores to control the flow of customers.\n"
    "### Reasoning for answer choice D: The answer is 'mall'. Revolving doors are commonly "
    "found in malls to control pedestrian traffic flow and prevent congestion.\n"
    "### Reasoning for answer choice E: The answer is New York. The revolving door is a "
    "security measure at the Empire State Building in New York City.\n"
    "\n";

const char* kWrapLine =
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion01EveryStrategyMakesItsContractedCallCount) {
    CriterionLine line{1, "strategy call counts: 1 direct, n+1 reasoning-guided"};
    const auto start = Clock::now();

    bp::SplitMix64 rng(0xacce9701ULL);
    const bp::PromptLibrary library;
    const bp::GenerationParams params;
    bp::MockBackend backend;  // answers everything with the default response

    for (int round = 0; round < 200; ++round) {
        bp::McqInstance instance;
        instance.question_id = "rand-" + std::to_string(round);
        instance.question = "Synthetic question number " + std::to_string(round) + "?";
        const std::size_t n = 2 + rng.bounded(5);  // 2..6 options
        for (std::size_t i = 0; i < n; ++i) {
            instance.options.push_back({static_cast<char>('A' + i),
                                        "choice " + std::to_string(round) + "-" +
                                            std::to_string(i)});
        }
        instance.gold_label = static_cast<char>('A' + rng.bounded(n));
        bp::validate_instance(instance);

        for (const bp::Strategy strategy : bp::all_strategies()) {
            const long before = backend.calls_made();
            const auto result = bp::run_strategy(instance, strategy, library, backend, params);
            const long made = backend.calls_made() - before;
            const long expected = bp::is_bias_strategy(strategy) ? static_cast<long>(n) + 1 : 1;
            ASSERT_TRUE(std::holds_alternative<bp::Prediction>(result));
            const auto& prediction = std::get<bp::Prediction>(result);
            EXPECT_EQ(made, expected) << bp::to_string(strategy) << " n=" << n;
            EXPECT_EQ(prediction.calls.size(), static_cast<std::size_t>(expected));
        }
    }
    EXPECT_LT(seconds_since(start), 5.0);
}

TEST_F(Acceptance, Criterion02PromptsMatchTheCanonicalExampleByteForByte) {
    CriterionLine line{2, "prompt rendering matches the canonical example"};
    const bp::PromptLibrary library;
    const auto instance = canonical_instance();

    const auto reasoning = library.render_reasoning_generation(kCanonicalQuestion, "bank");
    EXPECT_EQ(reasoning.user_text(),
              "Given the following question:\n"
              "A revolving door is convenient for two direction travel, but it also serves "
              "as a security measure at a what?\n"
              "Provide reasoning proving that 'bank' is the correct choice without any "
              "textual description in one sentence.");

    const auto consensus = library.render_consensus(instance, canonical_reasonings(), false);
    EXPECT_EQ(consensus.user_text(), std::string(kConsensusBody) + kWrapLine);

    const auto consensus_cot = library.render_consensus(instance, canonical_reasonings(), true);
    EXPECT_EQ(consensus_cot.user_text(), std::string(kConsensusBody) +
                                             "Let's think step by step before answering.\n" +
                                             kWrapLine);

    bp::McqInstance direct;
    direct.question_id = "direct-1";
    direct.question = "Which tool cuts wood?";
    direct.options = {{'A', "a saw"}, {'B', "a pillow"}};
    direct.gold_label = 'A';
    EXPECT_EQ(library.render_direct(direct, false).user_text(),
              "### Question: Which tool cuts wood?\n"
              "### Answer choices: A. a saw | B. a pillow\n"
              "\n" +
                  std::string(kWrapLine));
    EXPECT_EQ(library.render_direct(direct, true).user_text(),
              "### Question: Which tool cuts wood?\n"
              "### Answer choices: A. a saw | B. a pillow\n"
              "\n"
              "Let's think step by step before answering.\n" +
                  std::string(kWrapLine));
}

TEST_F(Acceptance, Criterion03ExtractionCorpusParsesThirtyOutOfThirty) {
    CriterionLine line{3, "answer extraction corpus, 30/30"};
    const std::vector<bp::McqOption> options = canonical_instance().options;

    struct Case {
        const char* text;
        std::optional<char> label;
        bp::ParseStatus status;
    };
    const Case corpus[] = {
        // Placeholder tier, label forms.
        {"So the answer is: B", 'B', bp::ParseStatus::placeholder},
        {"so the answer is: b.", 'B', bp::ParseStatus::placeholder},
        {"So the answer is: (C)", 'C', bp::ParseStatus::placeholder},
        {"So the answer is: 'D'", 'D', bp::ParseStatus::placeholder},
        {"So the answer is: **A**", 'A', bp::ParseStatus::placeholder},
        {"So the answer is: [E]", 'E', bp::ParseStatus::placeholder},
        {"Considering every reasoning above, so the answer is: E", 'E',
         bp::ParseStatus::placeholder},
        {"So the answer is: A. Wait, the mall fits better.\nSo the answer is: D", 'D',
         bp::ParseStatus::placeholder},
        // Placeholder tier, option-text forms.
        {"So the answer is: bank", 'A', bp::ParseStatus::placeholder},
        {"So the answer is: department store", 'C', bp::ParseStatus::placeholder},
        {"So the answer is: 'new york'", 'E', bp::ParseStatus::placeholder},
        {"So the answer is: New York, without a doubt.", 'E', bp::ParseStatus::placeholder},
        {"So the answer is:\nbank\nbecause of the security angle.", 'A',
         bp::ParseStatus::placeholder},
        {"So the answer is: mall since it is busiest.", 'D', bp::ParseStatus::placeholder},
        // Label fallback.
        {"The answer is B", 'B', bp::ParseStatus::label_fallback},
        {"I believe the answer is (d).", 'D', bp::ParseStatus::label_fallback},
        {"My answer is 'E' here.", 'E', bp::ParseStatus::label_fallback},
        {"The answer is unclear at first, but the answer is C", 'C',
         bp::ParseStatus::label_fallback},
        {"After weighing the choices, I pick B.", 'B', bp::ParseStatus::label_fallback},
        {"B", 'B', bp::ParseStatus::label_fallback},
        // Text fallback.
        {"Probably the library, all things considered.", 'B', bp::ParseStatus::text_fallback},
        {"A revolving door guards the bank at night.", 'A', bp::ParseStatus::text_fallback},
        {"Department store hours differ widely.", 'C', bp::ParseStatus::text_fallback},
        {"It has to be new york.", 'E', bp::ParseStatus::text_fallback},
        // No recoverable answer.
        {"", std::nullopt, bp::ParseStatus::failed},
        {"It depends.", std::nullopt, bp::ParseStatus::failed},
        {"So the answer is: {{placeholder}}", std::nullopt, bp::ParseStatus::failed},
        {"Both bank and library seem plausible.", std::nullopt, bp::ParseStatus::failed},
        {"The banker agreed to nothing.", std::nullopt, bp::ParseStatus::failed},
        {"They met at the CLUB", std::nullopt, bp::ParseStatus::failed},
    };
    ASSERT_EQ(std::size(corpus), std::size_t{30});

    int hits = 0;
    for (const auto& c : corpus) {
        const auto got = bp::extract_answer(c.text, options);
        const bool ok = got.label == c.label && got.status == c.status;
        EXPECT_TRUE(ok) << "text: " << c.text << "\n  got label "
                        << (got.label ? std::string(1, *got.label) : "none") << ", status "
                        << bp::to_string(got.status);
        hits += ok ? 1 : 0;
    }
    EXPECT_EQ(hits, 30);
}

TEST_F(Acceptance, Criterion04ZTestMatchesIndependentOracles) {
    CriterionLine line{4, "two-proportion z-test against precomputed oracles"};
    struct Oracle {
        long k1, n1, k2, n2;
        double z, p;
        bool significant;
    };
    // Reference values computed independently with 60-digit arithmetic.
    const Oracle oracles[] = {
        {50, 100, 50, 100, 0.0, 1.0, false},
        {60, 100, 40, 100, 2.8284271247461901, 0.0046777349810472658, true},
        {40, 100, 60, 100, -2.8284271247461901, 0.0046777349810472658, true},
        {806, 1221, 795, 1221, 0.46845928488053941, 0.6394561806966651, false},
        {1, 10, 9, 10, -3.5777087639996635, 0.00034661935113466698, true},
        {0, 10, 0, 10, 0.0, 1.0, false},
        {10, 10, 10, 10, 0.0, 1.0, false},
        {0, 10, 10, 10, -4.4721359549995794, 7.7442164310440836e-06, true},
        {117, 187, 100, 187, 1.7811685956790369, 0.074884912338400886, false},
        {55, 1000, 45, 1000, 1.0259783520851541, 0.30490178817878833, false},
        {1550, 2290, 1460, 2290, 2.8018325376656676, 0.0050813242521087029, true},
        {3, 5, 2, 5, 0.63245553203367587, 0.52708925686553809, false},
    };
    for (const auto& o : oracles) {
        const auto got = bp::two_proportion_z_test(o.k1, o.n1, o.k2, o.n2);
        EXPECT_NEAR(got.z, o.z, 1e-9) << o.k1 << "/" << o.n1 << " vs " << o.k2 << "/" << o.n2;
        EXPECT_NEAR(got.p, o.p, 1e-9) << o.k1 << "/" << o.n1 << " vs " << o.k2 << "/" << o.n2;
        EXPECT_EQ(got.significant, o.significant);
    }
}

TEST_F(Acceptance, Criterion05DeltaStringsAreExact) {
    CriterionLine line{5, "accuracy delta formatting"};
    const auto base = bp::score(500, 1000);
    EXPECT_EQ(bp::format_delta(bp::score(509, 1000), base), "+0.9%");
    EXPECT_EQ(bp::format_delta(bp::score(591, 1000), base), "+9.1%");
    EXPECT_EQ(bp::format_delta(base, bp::score(509, 1000)), "-0.9%");
    EXPECT_EQ(bp::format_delta(base, base), "+0.0%");
    // Same rounded percent, lower raw fraction: the sign survives rounding.
    EXPECT_EQ(bp::format_delta(bp::score(333, 1000), bp::score(3333, 10000)), "-0.0%");
}

TEST_F(Acceptance, Criterion06ExclusiveWinsMatchBruteForce) {
    CriterionLine line{6, "exclusive-win counts against brute force"};
    bp::SplitMix64 rng(0xacce9706ULL);
    for (int round = 0; round < 100; ++round) {
        const std::size_t run_count = 2 + rng.bounded(3);
        const std::size_t question_count = 1 + rng.bounded(10);
        bp::CorrectnessByRun runs;
        for (std::size_t r = 0; r < run_count; ++r) {
            auto& per_question = runs["run" + std::to_string(r)];
            for (std::size_t q = 0; q < question_count; ++q) {
                per_question["q" + std::to_string(q)] = rng.bounded(2) == 1;
            }
        }

        const auto got = bp::exclusive_wins(runs);
        for (const auto& [label, per_question] : runs) {
            long expected = 0;
            for (const auto& [qid, correct] : per_question) {
                if (!correct) continue;
                bool everyone_else_missed = true;
                for (const auto& [other_label, other] : runs) {
                    if (other_label != label && other.at(qid)) {
                        everyone_else_missed = false;
                        break;
                    }
                }
                if (everyone_else_missed) ++expected;
            }
            EXPECT_EQ(got.at(label), expected) << label << " in round " << round;
        }
    }
}

TEST_F(Acceptance, Criterion07SeededPermutationsAreSoundAndReproducible) {
    CriterionLine line{7, "seeded option permutations: sound, stable across processes"};

    // Soundness over 1000 seeds: gold text survives, labels stay consecutive,
    // the option multiset is preserved, and the permutation that
    // option_permutation declares is the one actually applied.
    const auto source = canonical_instance();
    for (std::int64_t seed = 1; seed <= 1000; ++seed) {
        const auto permuted = bp::permute_options(source, seed);
        ASSERT_EQ(permuted.options.size(), source.options.size());
        EXPECT_EQ(permuted.ordering_id, seed);
        EXPECT_EQ(permuted.gold_text(), source.gold_text());
        bp::validate_instance(permuted);

        const auto perm =
            bp::option_permutation(seed, source.question_id, source.options.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            EXPECT_EQ(permuted.options[i].label, static_cast<char>('A' + i));
            EXPECT_EQ(permuted.options[i].text, source.options[perm[i]].text) << seed;
        }
    }

    // Cross-process reproducibility: two fresh CLI invocations with the same
    // seed and ordering write byte-identical records.
    const std::string common = cli() + " run --dataset " + shipped("sample20.jsonl").string() +
                               " --format jsonl --strategy bias --mock " +
                               shipped("mock_all.jsonl").string() +
                               " --seed 7 --ordering 7001 --out ";
    const auto out_a = (dir() / "perm_a.jsonl").string();
    const auto out_b = (dir() / "perm_b.jsonl").string();
    ASSERT_EQ(run_command(common + out_a).exit_code, 0);
    ASSERT_EQ(run_command(common + out_b).exit_code, 0);
    const auto bytes = read_file(out_a);
    ASSERT_FALSE(bytes.empty());
    EXPECT_EQ(bytes, read_file(out_b));
    for (const auto& record : bp::read_records(out_a)) {
        EXPECT_EQ(record.ordering_id, 7001);
    }
}

TEST_F(Acceptance, Criterion08TokenAccountingIsConservative) {
    CriterionLine line{8, "token accounting: five options at 8 tokens/call sum to 48"};

    const auto dataset = dir() / "tokens5.jsonl";
    {
        std::ofstream out(dataset);
        for (int q = 0; q < 4; ++q) {
            out << R"({"question_id":"tok-)" << q << R"(","question":"Synthetic question )"
                << q << R"(?","options":["red","green","blue","amber","violet"],)"
                << R"("gold_index":)" << q % 5 << "}\n";
        }
    }
    const auto fixture = (dir() / "tokens5_mock.jsonl").string();
    ASSERT_EQ(run_command(mockgen() + " --dataset " + dataset.string() +
                          " --format jsonl --out " + fixture + " --tokens-per-call 8")
                  .exit_code,
              0);

    const auto out = (dir() / "tokens5_run.jsonl").string();
    ASSERT_EQ(run_command(cli() + " run --dataset " + dataset.string() +
                          " --format jsonl --strategy bias --mock " + fixture + " --out " + out)
                  .exit_code,
              0);

    const auto records = bp::read_records(out);
    ASSERT_EQ(records.size(), std::size_t{4});
    for (const auto& record : records) {
        ASSERT_EQ(record.calls.size(), std::size_t{6});  // 5 reasonings + 1 consensus
        long sum = 0;
        for (const auto& call : record.calls) {
            EXPECT_EQ(call.completion_tokens, 8);
            sum += call.completion_tokens;
        }
        EXPECT_EQ(sum, 48);
        EXPECT_EQ(record.total_completion_tokens(), 48);
    }
    const auto stats = bp::token_stats(records);
    EXPECT_EQ(stats.mean, 48.0);
    EXPECT_EQ(stats.min, 48);
    EXPECT_EQ(stats.max, 48);
    EXPECT_EQ(stats.median, 48.0);

    // The same totals must survive aggregation into a report.
    const auto prefix = (dir() / "tokens5_report").string();
    ASSERT_EQ(run_command(cli() + " report " + out + " --out " + prefix).exit_code, 0);
    EXPECT_NE(read_file(prefix + ".csv").find(",48.0,48,48.0,48.0,48.0,48"),
              std::string::npos)
        << read_file(prefix + ".csv");
}

TEST_F(Acceptance, Criterion09ShippedFixturePipelineIsDeterministic) {
    CriterionLine line{9, "shipped-fixture pipeline: stable runs, reports, comparison"};
    const auto start = Clock::now();

    const std::string data = shipped("sample20.jsonl").string();
    const std::string mock = shipped("mock_all.jsonl").string();
    const std::string base_flags =
        " --dataset " + data + " --format jsonl --mock " + mock + " --out ";

    std::vector<std::string> zero_runs, bias_runs;
    for (int i = 0; i < 3; ++i) {
        const auto zero_out = (dir() / ("ship_zero_" + std::to_string(i) + ".jsonl")).string();
        const auto bias_out = (dir() / ("ship_bias_" + std::to_string(i) + ".jsonl")).string();
        auto result =
            run_command(cli() + " run --strategy zero_shot" + base_flags + zero_out);
        ASSERT_EQ(result.exit_code, 0) << result.output;
        EXPECT_EQ(result.output, "20/20, 100.0\n");
        result = run_command(cli() + " run --strategy bias" + base_flags + bias_out);
        ASSERT_EQ(result.exit_code, 0) << result.output;
        EXPECT_EQ(result.output, "20/20, 100.0\n");
        zero_runs.push_back(zero_out);
        bias_runs.push_back(bias_out);
    }
    for (int i = 1; i < 3; ++i) {
        EXPECT_EQ(read_file(zero_runs[0]), read_file(zero_runs[i])) << "zero_shot run " << i;
        EXPECT_EQ(read_file(bias_runs[0]), read_file(bias_runs[i])) << "bias run " << i;
    }

    std::vector<std::string> prefixes;
    for (int i = 0; i < 3; ++i) {
        const auto prefix = (dir() / ("ship_report_" + std::to_string(i))).string();
        const auto result =
            run_command(cli() + " report " + bias_runs[0] + " --out " + prefix);
        ASSERT_EQ(result.exit_code, 0) << result.output;
        prefixes.push_back(prefix);
    }
    const auto csv = read_file(prefixes[0] + ".csv");
    EXPECT_EQ(csv.rfind("dataset,model,strategy,", 0), std::size_t{0});
    EXPECT_NE(csv.find("jsonl,default,bias,20,20,100.0,"), std::string::npos) << csv;
    for (int i = 1; i < 3; ++i) {
        EXPECT_EQ(csv, read_file(prefixes[i] + ".csv"));
        EXPECT_EQ(read_file(prefixes[0] + ".md"), read_file(prefixes[i] + ".md"));
    }

    const auto compare = run_command(cli() + " compare " + zero_runs[0] + " " + bias_runs[0]);
    ASSERT_EQ(compare.exit_code, 0) << compare.output;
    EXPECT_NE(compare.output.find("baseline: run 0 (zero_shot)"), std::string::npos);
    EXPECT_NE(compare.output.find("| jsonl | default | bias | 20 | 20 | 100.0 |"),
              std::string::npos)
        << compare.output;

    EXPECT_LT(seconds_since(start), 60.0);
}

TEST_F(Acceptance, Criterion10LiveEndpointSmoke) {
    const char* endpoint = std::getenv("BIASPROMPT_ENDPOINT");
    if (endpoint == nullptr || *endpoint == '\0') {
        std::cout << "criterion 10 (live endpoint smoke): SKIP "
                  << "(set BIASPROMPT_ENDPOINT to enable)" << std::endl;
        GTEST_SKIP() << "BIASPROMPT_ENDPOINT not set";
    }
    CriterionLine line{10, "live endpoint smoke: 4/5 answers parseable"};

    bp::HttpBackendOptions options;
    options.base_url = endpoint;
    if (const char* model = std::getenv("BIASPROMPT_MODEL")) options.model = model;
    options.retries = 2;
    bp::HttpBackend backend(std::move(options));

    bp::GenerationParams params;
    params.max_new_tokens = 128;
    params.context_window = 4096;
    const bp::PromptLibrary library;

    auto loaded = bp::load_dataset(shipped("sample20.jsonl"), bp::DatasetTag::jsonl);
    ASSERT_GE(loaded.instances.size(), std::size_t{5});

    int parseable = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto result = bp::run_strategy(loaded.instances[i], bp::Strategy::zero_shot,
                                             library, backend, params);
        if (const auto* prediction = std::get_if<bp::Prediction>(&result)) {
            if (prediction->parse_status == bp::ParseStatus::failed) continue;
            ++parseable;
            EXPECT_GT(prediction->total_completion_tokens(), 0)
                << "no usage recorded for " << prediction->question_id;
        }
    }
    EXPECT_GE(parseable, 4) << "only " << parseable << " of 5 answers were parseable";
}

}  // namespace
