// Copyright 2026 The discourse-miner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Writes the bundled synthetic demo corpus: 519 raw records that ingest to
// exactly 500 posts (11 duplicates, 5 non-English, 3 without keywords),
// with scripted labels, planted topic vocabularies, a physical-activity
// subcorpus, and a year-over-year decline in negative-emotion wording.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/timeparse.hpp"

namespace {

struct Record {
  std::string id;
  std::int64_t created_at;
  std::string text;
  std::string location;
  std::string lang;  // empty = omit the field
  std::string source;
};

const char* kIrrelevant[] = {
    "Writing a fiction story where the hero survives breast cancer and finds the meaning of "
    "life in a game",
    "This song about breast cancer is on the new album, the concert and the movie were great "
    "tonight",
    "A recipe blog and the weather forecast mention breast cancer awareness in passing during "
    "the show",
    "The novel chapter where breast cancer appears is just a plot device for the drama series "
    "episode",
    "Our trivia game night question was about breast cancer history, the quiz and the music "
    "were fun",
};

const char* kPromotional[] = {
    "Schedule a mammogram screening today, the clinic offers a free checkup for early "
    "detection of breast cancer",
    "Join our charity fundraiser and donate to the pink ribbon campaign for breast cancer "
    "awareness this October",
    "The clinic shares new breast cancer treatment guidance, ask your doctor about chemo care "
    "and surgery options #breastcancer",
    "Our fundraiser event needs you, donate now and wear the pink ribbon for breast cancer "
    "awareness #pinkribbon",
};

const char* kLaypeople[] = {
    "My mom got her breast cancer diagnosis this week, the doctor says chemo and surgery are "
    "the treatment",
    "My family stands with my sister, we hold hope and love for her breast cancer fight every "
    "day",
    "After her story I booked a mammogram screening and a checkup, early detection of breast "
    "cancer matters",
    "Grateful for my family and friends, their hope and love carry me through breast cancer "
    "#BreastCancer #survivor",
};

const char* kLocations[] = {
    "Gainesville, FL", "Los Angeles, CA", "new york",   "Miami, FL",  "Austin, TX",
    "",                "Paris, France",   "Chicago, IL", "Seattle, WA", "somewhere out there",
};

const char* kNegativeWords[] = {"scared", "worried", "sad", "afraid"};

std::string label_of(int i) {
  switch (i % 3) {
    case 0: return "irrelevant";
    case 1: return "promotional";
    default: return "laypeople";
  }
}

Record make_post(int i) {
  Record r;
  char idbuf[16];
  std::snprintf(idbuf, sizeof idbuf, "t%04d", i + 1);
  r.id = idbuf;
  // month decorrelated from the i%3 group cycle so every group covers the
  // whole 2013-01 .. 2017-12 range
  int m = ((i / 3) * 7 + (i % 3) * 20) % 60;
  int year = 2013 + m / 12;
  int month = 1 + m % 12;
  int day = 1 + (i * 7) % 27;
  r.created_at = miner::utc_epoch(year, month, day, i % 24, (i * 13) % 60, i % 60);
  r.location = kLocations[i % 10];
  if (i % 7 != 0) r.lang = "en";
  r.source = (i % 4 == 0) ? "random_sample" : "search_archive";

  int j = i / 3;
  std::string text;
  if (i % 3 == 0) {
    text = kIrrelevant[j % 5];
  } else if (i % 3 == 1) {
    text = kPromotional[j % 4];
  } else {
    text = kLaypeople[j % 4];
    // negative-emotion wording declines year over year
    static const int base[5] = {3, 2, 2, 1, 0};
    int n_neg = base[m / 12] + (i % 2);
    if (m / 12 == 4) n_neg = i % 2;
    if (n_neg > 0) {
      text += " I felt";
      for (int k = 0; k < n_neg; ++k) {
        if (k) text += " and";
        text += " ";
        text += kNegativeWords[(j + k) % 4];
      }
      text += " at first";
    }
    if (j % 3 == 0) {
      text += (j % 6 == 0)
                  ? " We walk the charity race this weekend, my team will finish every mile to "
                    "honor her"
                  : " Daily exercise and a steady workout routine can reduce the risk, stay "
                    "active and strong";
    }
  }
  if (i % 13 == 0) text = "@Channel9 " + text;
  if (i % 11 == 0) text += " http://t.co/xQgeMny5";
  if (i % 17 == 0) text += " \xF0\x9F\x98\x80";  // U+1F600
  r.text = text;
  return r;
}

nlohmann::json to_json(const Record& r) {
  nlohmann::json j{{"id", r.id}, {"created_at", miner::format_utc(r.created_at)}, {"text", r.text}};
  if (!r.location.empty()) j["user_location"] = r.location;
  if (!r.lang.empty()) j["lang"] = r.lang;
  j["source"] = r.source;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out_dir = argc > 1 ? argv[1] : "data/fixtures";
  std::filesystem::create_directories(out_dir);

  std::vector<Record> posts;
  for (int i = 0; i < 500; ++i) posts.push_back(make_post(i));

  std::ofstream corpus(out_dir / "corpus_raw.jsonl");
  std::ofstream annotations(out_dir / "annotations.tsv");
  if (!corpus || !annotations) {
    std::cerr << "cannot write to " << out_dir << "\n";
    return 1;
  }
  int dup_emitted = 0, es_emitted = 0;
  for (int i = 0; i < 500; ++i) {
    corpus << to_json(posts[i]).dump() << '\n';
    annotations << posts[i].id << '\t' << label_of(i) << '\n';
    if (i % 45 == 44 && dup_emitted < 10) {
      // same id, later timestamp: dropped by id dedup
      Record dup = posts[(dup_emitted * 41) % 500];
      dup.created_at += 86400;
      dup.text += " again";
      corpus << to_json(dup).dump() << '\n';
      ++dup_emitted;
    }
    if (i % 90 == 89 && es_emitted < 5) {
      Record es;
      es.id = "es" + std::to_string(++es_emitted);
      es.created_at = miner::utc_epoch(2015, 6, 1 + es_emitted);
      es.text = "la vida es buena y el sol brilla sobre la ciudad entera";
      es.lang = "es";
      es.source = "search_archive";
      corpus << to_json(es).dump() << '\n';
    }
  }
  {
    // same text and timestamp as t0050 under a different id: text-dedup drop
    Record textdup = posts[49];
    textdup.id = "x-dup-text";
    corpus << to_json(textdup).dump() << '\n';
  }
  for (int k = 1; k <= 3; ++k) {
    Record nk;
    nk.id = "nk" + std::to_string(k);
    nk.created_at = miner::utc_epoch(2016, 3, k);
    nk.text = "Just a normal day with the usual morning coffee and a walk in the park";
    nk.lang = "en";
    nk.source = "random_sample";
    corpus << to_json(nk).dump() << '\n';
  }

  {
    std::ofstream merge(out_dir / "merge_map.tsv");
    merge << "0\tawareness_outreach\n1\tawareness_outreach\n2\tpersonal_experience\n"
             "3\tpersonal_experience\n";
    std::ofstream pa_merge(out_dir / "pa_merge_map.tsv");
    pa_merge << "0\tgive_support\n1\treduce_risk\n";
  }
  {
    std::ofstream conf(out_dir / "run.conf");
    conf << "# Demo pipeline configuration for the bundled synthetic corpus.\n"
            "# Paths are relative to the repository root.\n"
            "\n"
            "[inputs]\n"
            "posts = data/fixtures/corpus_raw.jsonl\n"
            "lang_filter = en\n"
            "parse = strict\n"
            "keyword_filter = true\n"
            "\n"
            "[keywords]\n"
            "topic_list = data/keywords_breast_cancer.txt\n"
            "pa_list = data/keywords_pa.txt\n"
            "suggest_min_count = 2\n"
            "\n"
            "[lexicon]\n"
            "path = data/lexicon_demo.tsv\n"
            "\n"
            "[classifier]\n"
            "annotations = data/fixtures/annotations.tsv\n"
            "dims = 65536\n"
            "epochs = 40\n"
            "learning_rate = 0.5\n"
            "l2 = 0.0001\n"
            "batch = 16\n"
            "seed = 7\n"
            "\n"
            "[btm]\n"
            "k = 4\n"
            "beta = 0.01\n"
            "iterations = 400\n"
            "seed = 42\n"
            "window = 0\n"
            "merge_map = data/fixtures/merge_map.tsv\n"
            "top_words = 15\n"
            "\n"
            "[pa]\n"
            "k = 2\n"
            "iterations = 300\n"
            "seed = 99\n"
            "merge_map = data/fixtures/pa_merge_map.tsv\n"
            "\n"
            "[sentiment]\n"
            "group = laypeople\n"
            "\n"
            "[output]\n"
            "dir = out\n";
  }
  std::cout << "wrote demo corpus to " << out_dir << "\n";
  return 0;
}
