#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"
#include "t3/provider/http_provider.hpp"
#include "t3/provider/parse.hpp"
#include "t3/provider/request.hpp"
#include "t3/provider/transcript.hpp"
#include "testutil.hpp"

using namespace t3::provider;
using nlohmann::json;

namespace {

ProviderRequest sample_request() {
  ProviderRequest req;
  req.backend = Backend::kOpenAiCompatible;
  req.model = "gpt-test";
  req.prompt = "Summarize this.";
  return req;
}

}  // namespace

TEST_CASE("sha256_hex matches known digests") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("canonical request JSON is key-sorted and omits absent optionals") {
  ProviderRequest req = sample_request();
  std::string canonical = canonical_request_json(req);
  json obj = json::parse(canonical);
  CHECK_FALSE(obj.contains("backend"));
  CHECK(obj["model"] == "gpt-test");
  CHECK(obj["safety_mode"] == "default");
  CHECK_FALSE(obj.contains("temperature"));
  CHECK_FALSE(obj.contains("max_output_tokens"));

  std::vector<std::string> keys;
  for (auto it = obj.begin(); it != obj.end(); ++it) keys.push_back(it.key());
  std::vector<std::string> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  CHECK(keys == sorted);

  req.temperature = 0.7;
  req.max_output_tokens = 512;
  json full = json::parse(canonical_request_json(req));
  CHECK(full["temperature"] == 0.7);
  CHECK(full["max_output_tokens"] == 512);
}

TEST_CASE("request_hash is stable and content-sensitive") {
  ProviderRequest req = sample_request();
  std::string h1 = request_hash(req);
  CHECK(h1.size() == 64);
  CHECK(h1 == request_hash(req));
  CHECK(h1 == sha256_hex(canonical_request_json(req)));

  ProviderRequest other = req;
  other.prompt += " Slightly different.";
  CHECK(request_hash(other) != h1);

  ProviderRequest warm = req;
  warm.temperature = 0.2;
  CHECK(request_hash(warm) != h1);

  // Record/replay round trips depend on the hash ignoring the backend: the
  // same request keyed while recording live must hit when replayed.
  ProviderRequest replayed = req;
  replayed.backend = Backend::kReplay;
  CHECK(request_hash(replayed) == h1);
}

TEST_CASE("lenient parsing survives fences, prose and case drift") {
  std::string fenced =
      "Sure! Here you go:\n```json\n"
      R"({"Summary": "short text", "Summary_generation_experience": "rule one"})"
      "\n```\nHope that helps.";
  ParsedSummaryOutput s = parse_summary_output(fenced);
  CHECK(s.summary == "short text");
  CHECK(s.summary_experience == "rule one");

  // Case-insensitive key fallback and braces inside string values.
  ParsedSummaryOutput odd = parse_summary_output(
      R"({"summary": "brace } inside", "summary_generation_experience": "e"})");
  CHECK(odd.summary == "brace } inside");

  // A malformed balanced span first; the parser retries from the next brace.
  ParsedSummaryOutput recovered = parse_summary_output(
      "header {not json} then "
      R"({"Summary": "s", "Summary_generation_experience": "e"})");
  CHECK(recovered.summary == "s");
}

TEST_CASE("qa output accepts numbered map in numeric order or an array") {
  std::string numbered = R"({
    "Generated_QA_pairs": {
      "10": {"Question": "tenth?", "Answer": "ten"},
      "2": {"Question": "second?", "Answer": "two"},
      "1": {"Question": "first?", "Answer": "one"}
    },
    "QA_generation_experience": "be precise"
  })";
  ParsedQaOutput qa = parse_qa_output(numbered);
  REQUIRE(qa.qa_pairs.size() == 3);
  CHECK(qa.qa_pairs[0].question == "first?");
  CHECK(qa.qa_pairs[1].question == "second?");
  CHECK(qa.qa_pairs[2].question == "tenth?");  // numeric, not lexicographic
  CHECK(qa.qa_experience == "be precise");

  std::string array_form = R"({
    "Generated_QA_pairs": [
      {"question": "a?", "answer": "a"},
      {"Question": "b?", "Answer": "b"}
    ],
    "QA_generation_experience": "mixed case tolerated"
  })";
  ParsedQaOutput arr = parse_qa_output(array_form);
  REQUIRE(arr.qa_pairs.size() == 2);
  CHECK(arr.qa_pairs[0].question == "a?");
  CHECK(arr.qa_pairs[1].answer == "b");
}

TEST_CASE("parse failures throw with the failing shape") {
  CHECK_THROWS_AS(parse_summary_output("no json here at all"), t3::ParseError);
  CHECK_THROWS_AS(parse_summary_output(R"({"Summary": "s"})"), t3::ParseError);
  CHECK_THROWS_AS(parse_qa_output(R"({"QA_generation_experience": "e"})"), t3::ParseError);
  CHECK_THROWS_AS(
      parse_qa_output(
          R"({"Generated_QA_pairs": {"one": {"Question": "q", "Answer": "a"}}, "QA_generation_experience": "e"})"),
      t3::ParseError);
  CHECK_THROWS_AS(
      parse_qa_output(
          R"({"Generated_QA_pairs": {"1": {"Question": "", "Answer": "a"}}, "QA_generation_experience": "e"})"),
      t3::ParseError);
  CHECK_THROWS_AS(
      parse_qa_output(
          R"({"Generated_QA_pairs": {"1": {"Question": "q", "Answer": 3}}, "QA_generation_experience": "e"})"),
      t3::ParseError);
}

TEST_CASE("strict mode demands the exact canonical shape") {
  std::string exact = R"({"Summary": "s", "Summary_generation_experience": "e"})";
  CHECK(parse_summary_output(exact, true).summary == "s");
  CHECK_THROWS_AS(parse_summary_output("prefix " + exact, true), t3::ParseError);
  CHECK_THROWS_AS(
      parse_summary_output(R"({"summary": "s", "Summary_generation_experience": "e"})", true),
      t3::ParseError);
  CHECK_THROWS_AS(
      parse_qa_output(
          R"({"Generated_QA_pairs": [], "QA_generation_experience": "e"})", true),
      t3::ParseError);
}

TEST_CASE("serialize and parse round trip both shapes") {
  ParsedQaOutput qa;
  qa.qa_pairs = {{"What happened?", "An event."}, {"Why?", "Because."}};
  qa.qa_experience = "ask about causes";
  CHECK(parse_qa_output(serialize(qa), true) == qa);

  ParsedSummaryOutput sum;
  sum.summary = "A short summary.";
  sum.summary_experience = "stay close to the text";
  CHECK(parse_summary_output(serialize(sum), true) == sum);
}

TEST_CASE("transcript store records, persists and replays") {
  t3test::TmpDir tmp;
  std::string path = tmp.file("transcript.jsonl");

  ProviderRequest req = sample_request();
  ProviderResponse resp;
  resp.raw_text = "recorded reply";
  resp.latency_ms = 12;
  resp.usage = TokenUsage{100, 20};

  TranscriptStore store;
  store.attach_file(path);
  store.record(req, resp);
  CHECK(store.size() == 1);
  CHECK(store.contains(request_hash(req)));
  CHECK(store.lookup(request_hash(req)).raw_text == "recorded reply");

  // A second store loads what the first wrote.
  TranscriptStore loaded;
  loaded.load(path);
  CHECK(loaded.size() == 1);
  ProviderResponse back = loaded.lookup(request_hash(req));
  CHECK(back.raw_text == "recorded reply");
  CHECK(back.latency_ms == 12);
  REQUIRE(back.usage.has_value());
  CHECK(back.usage->prompt_tokens == 100);
  CHECK(back.usage->completion_tokens == 20);

  CHECK_THROWS_AS(loaded.lookup("deadbeef"), t3::ReplayMissError);
  try {
    loaded.lookup("deadbeef");
  } catch (const t3::ReplayMissError& e) {
    CHECK(e.hash() == "deadbeef");
  }
}

TEST_CASE("duplicate hashes keep the last response") {
  t3test::TmpDir tmp;
  std::string path = tmp.file("dup.jsonl");
  ProviderRequest req = sample_request();

  TranscriptStore store;
  store.attach_file(path);
  store.record(req, {.raw_text = "first"});
  store.record(req, {.raw_text = "second"});
  CHECK(store.size() == 1);
  CHECK(store.lookup(request_hash(req)).raw_text == "second");

  TranscriptStore reread;
  reread.load(path);
  CHECK(reread.lookup(request_hash(req)).raw_text == "second");
}

TEST_CASE("replay and recording providers cooperate") {
  t3test::TmpDir tmp;
  std::string path = tmp.file("pair.jsonl");
  ProviderRequest req = sample_request();

  auto store = std::make_shared<TranscriptStore>();
  store->attach_file(path);
  RecordingProvider rec(std::make_unique<t3test::ScriptedProvider>(
                            std::vector<std::string>{"live answer"}),
                        store);
  CHECK(rec.complete(req).raw_text == "live answer");

  auto replay_store = std::make_shared<TranscriptStore>();
  replay_store->load(path);
  ReplayProvider replay(replay_store);
  CHECK(replay.complete(req).raw_text == "live answer");
  CHECK(replay.complete(req).request_hash == request_hash(req));

  ProviderRequest unseen = req;
  unseen.prompt = "never recorded";
  CHECK_THROWS_AS(replay.complete(unseen), t3::ReplayMissError);
}

TEST_CASE("openai wire request shape") {
  ProviderRequest req = sample_request();
  req.temperature = 0.5;
  WireRequest wire = build_wire_request(req, "", "sk-123");
  CHECK(wire.url == "https://api.openai.com/v1/chat/completions");
  json body = json::parse(wire.body);
  CHECK(body["model"] == "gpt-test");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "Summarize this.");
  CHECK(body["temperature"] == 0.5);
  bool has_auth = false;
  for (const auto& [name, value] : wire.headers) {
    if (name == "Authorization") {
      has_auth = true;
      CHECK(value == "Bearer sk-123");
    }
  }
  CHECK(has_auth);

  WireRequest custom = build_wire_request(req, "http://localhost:8080/v1/", "k");
  CHECK(custom.url == "http://localhost:8080/v1/chat/completions");
}

TEST_CASE("anthropic wire request shape") {
  ProviderRequest req = sample_request();
  req.backend = Backend::kAnthropic;
  WireRequest wire = build_wire_request(req, "", "ak-1");
  CHECK(wire.url == "https://api.anthropic.com/v1/messages");
  json body = json::parse(wire.body);
  CHECK(body["max_tokens"] == 4096);  // mandatory on this API
  CHECK(body["messages"][0]["content"] == "Summarize this.");
  bool has_key = false, has_version = false;
  for (const auto& [name, value] : wire.headers) {
    if (name == "x-api-key") has_key = value == "ak-1";
    if (name == "anthropic-version") has_version = !value.empty();
  }
  CHECK(has_key);
  CHECK(has_version);

  req.max_output_tokens = 1000;
  CHECK(json::parse(build_wire_request(req, "", "k").body)["max_tokens"] == 1000);
}

TEST_CASE("gemini wire request carries block_none safety settings") {
  ProviderRequest req = sample_request();
  req.backend = Backend::kGemini;
  req.model = "gemini-test";

  WireRequest plain = build_wire_request(req, "", "gk");
  CHECK(plain.url ==
        "https://generativelanguage.googleapis.com/v1beta/models/gemini-test"
        ":generateContent?key=gk");
  json plain_body = json::parse(plain.body);
  CHECK(plain_body["contents"][0]["parts"][0]["text"] == "Summarize this.");
  CHECK_FALSE(plain_body.contains("safetySettings"));

  req.safety_mode = SafetyMode::kBlockNone;
  json body = json::parse(build_wire_request(req, "", "gk").body);
  REQUIRE(body.contains("safetySettings"));
  REQUIRE(body["safetySettings"].size() == 4);
  std::vector<std::string> categories;
  for (const auto& entry : body["safetySettings"]) {
    CHECK(entry["threshold"] == "BLOCK_NONE");
    categories.push_back(entry["category"].get<std::string>());
  }
  std::vector<std::string> expected = {
      "HARM_CATEGORY_HARASSMENT", "HARM_CATEGORY_HATE_SPEECH",
      "HARM_CATEGORY_SEXUALLY_EXPLICIT", "HARM_CATEGORY_DANGEROUS_CONTENT"};
  CHECK(categories == expected);
}

TEST_CASE("replay backend has no wire protocol") {
  ProviderRequest req = sample_request();
  req.backend = Backend::kReplay;
  CHECK_THROWS_AS(build_wire_request(req, "", "k"), t3::ConfigError);
}

TEST_CASE("parse_wire_response per backend") {
  CHECK(parse_wire_response(
            Backend::kOpenAiCompatible,
            R"({"choices": [{"message": {"role": "assistant", "content": "hi"}}]})") == "hi");
  CHECK(parse_wire_response(Backend::kAnthropic,
                            R"({"content": [{"type": "text", "text": "hello"}]})") == "hello");
  CHECK(parse_wire_response(
            Backend::kGemini,
            R"({"candidates": [{"content": {"parts": [{"text": "hey"}]}}]})") == "hey");
  CHECK_THROWS_AS(parse_wire_response(Backend::kOpenAiCompatible, "not json"),
                  t3::ProviderError);
  CHECK_THROWS_AS(parse_wire_response(Backend::kOpenAiCompatible, R"({"weird": true})"),
                  t3::ProviderError);
}

TEST_CASE("credential env vars per backend") {
  CHECK(credential_env_var(Backend::kOpenAiCompatible) == "OPENAI_API_KEY");
  CHECK(credential_env_var(Backend::kAnthropic) == "ANTHROPIC_API_KEY");
  CHECK(credential_env_var(Backend::kGemini) == "GEMINI_API_KEY");
  CHECK(credential_env_var(Backend::kReplay).empty());
}

TEST_CASE("backend and safety enum round trips") {
  CHECK(backend_from_string(to_string(Backend::kGemini)) == Backend::kGemini);
  CHECK(safety_mode_from_string("block_none") == SafetyMode::kBlockNone);
  CHECK_THROWS_AS(backend_from_string("mystery"), t3::ConfigError);
  CHECK_THROWS_AS(safety_mode_from_string("sometimes"), t3::ConfigError);
}

TEST_CASE("rate limiter passes through when disabled") {
  RateLimiter unlimited(0.0);
  unlimited.acquire();  // must not block
  RateLimiter fast(60000.0);
  fast.acquire();
  fast.acquire();
}
