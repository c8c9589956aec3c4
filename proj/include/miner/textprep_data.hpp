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

#pragma once

#include <cstddef>

namespace miner::data {

// Default English stoplist (175 entries), overridable by file.
inline constexpr const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
    "and", "any", "are", "as", "at", "be", "because", "been", "before", "being",
    "below", "between", "both", "but", "by", "can", "cannot", "could", "did", "do",
    "does", "doing", "down", "during", "each", "few", "for", "from", "further", "get",
    "got", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "like", "me", "more", "most", "my", "myself", "no",
    "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other",
    "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
    "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then",
    "there", "these", "they", "this", "those", "through", "to", "too", "under", "until",
    "up", "very", "was", "we", "were", "what", "when", "where", "which", "while",
    "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves", "dont", "cant", "wont", "im", "ive", "aint", "hes", "shes", "thats",
    "whats", "isnt", "wasnt", "didnt", "doesnt", "youre", "theyre", "weve", "youve", "lets",
    "us", "amp", "rt", "via", "one", "two", "much", "many", "may", "might",
    "must", "shall", "says", "said", "say", "went", "go", "going", "gone", "make",
    "made", "still", "even", "ever", "never",
};

inline constexpr std::size_t kStopwordCount = sizeof(kStopwords) / sizeof(kStopwords[0]);

// Inflected -> lemma pairs that the suffix rules get wrong: irregular verbs,
// irregular plurals, and e-final verbs whose -ed/-ing forms need the e back.
// Kept closed under lemmatization (every value maps to itself).
inline constexpr const char* kLemmaPairs[][2] = {
    // irregular verb forms
    {"was", "be"}, {"were", "be"}, {"been", "be"}, {"being", "be"}, {"am", "be"},
    {"began", "begin"}, {"begun", "begin"}, {"beginning", "begin"},
    {"broke", "break"}, {"broken", "break"},
    {"brought", "bring"}, {"bringing", "bring"},
    {"built", "build"}, {"bought", "buy"},
    {"came", "come"}, {"coming", "come"},
    {"chose", "choose"}, {"chosen", "choose"}, {"choosing", "choose"},
    {"did", "do"}, {"done", "do"}, {"does", "do"},
    {"drank", "drink"}, {"drunk", "drink"},
    {"drove", "drive"}, {"driven", "drive"}, {"driving", "drive"},
    {"ate", "eat"}, {"eaten", "eat"},
    {"fell", "fall"}, {"fallen", "fall"},
    {"felt", "feel"}, {"fought", "fight"},
    {"found", "find"}, {"flew", "fly"}, {"flown", "fly"},
    {"forgot", "forget"}, {"forgotten", "forget"},
    {"got", "get"}, {"gotten", "get"}, {"getting", "get"},
    {"gave", "give"}, {"given", "give"}, {"giving", "give"},
    {"went", "go"}, {"gone", "go"}, {"goes", "go"},
    {"grew", "grow"}, {"grown", "grow"},
    {"had", "have"}, {"has", "have"}, {"having", "have"},
    {"heard", "hear"}, {"held", "hold"}, {"kept", "keep"},
    {"knew", "know"}, {"known", "know"},
    {"led", "lead"}, {"left", "leave"}, {"leaving", "leave"},
    {"lost", "lose"}, {"losing", "lose"},
    {"made", "make"}, {"making", "make"},
    {"meant", "mean"}, {"met", "meet"},
    {"paid", "pay"}, {"ran", "run"}, {"running", "run"},
    {"said", "say"}, {"saw", "see"}, {"seen", "see"},
    {"sold", "sell"}, {"sent", "send"},
    {"showed", "show"}, {"shown", "show"},
    {"sang", "sing"}, {"sung", "sing"}, {"sat", "sit"},
    {"spoke", "speak"}, {"spoken", "speak"},
    {"spent", "spend"}, {"stood", "stand"},
    {"took", "take"}, {"taken", "take"}, {"taking", "take"},
    {"taught", "teach"}, {"told", "tell"},
    {"thought", "think"}, {"threw", "throw"}, {"thrown", "throw"},
    {"understood", "understand"},
    {"wore", "wear"}, {"worn", "wear"},
    {"won", "win"}, {"winning", "win"},
    {"wrote", "write"}, {"written", "write"}, {"writing", "write"},
    {"woke", "wake"}, {"woken", "wake"},
    {"rose", "rise"}, {"risen", "rise"}, {"rising", "rise"},
    {"rode", "ride"}, {"ridden", "ride"}, {"riding", "ride"},
    {"beaten", "beat"},
    // irregular plurals
    {"children", "child"}, {"men", "man"}, {"women", "woman"},
    {"feet", "foot"}, {"teeth", "tooth"}, {"mice", "mouse"},
    {"lives", "life"}, {"wives", "wife"}, {"knives", "knife"},
    {"leaves", "leaf"}, {"halves", "half"}, {"selves", "self"},
    {"criteria", "criterion"}, {"phenomena", "phenomenon"},
    {"buses", "bus"}, {"gases", "gas"}, {"lenses", "lens"}, {"lens", "lens"},
    {"viruses", "virus"}, {"diagnoses", "diagnosis"}, {"analyses", "analysis"},
    {"crises", "crisis"},
    // e-final verbs whose stripped forms lose the e
    {"reduced", "reduce"}, {"reducing", "reduce"},
    {"raised", "raise"}, {"raising", "raise"},
    {"shared", "share"}, {"sharing", "share"},
    {"cared", "care"}, {"caring", "care"},
    {"hoped", "hope"}, {"hoping", "hope"},
    {"loved", "love"}, {"loving", "love"},
    {"saved", "save"}, {"saving", "save"},
    {"used", "use"}, {"using", "use"},
    {"caused", "cause"}, {"causing", "cause"},
    {"died", "die"}, {"dying", "die"},
    {"lived", "live"}, {"living", "live"},
    {"increased", "increase"}, {"increasing", "increase"},
    {"decreased", "decrease"}, {"decreasing", "decrease"},
    {"diagnosed", "diagnose"}, {"diagnosing", "diagnose"},
    {"exercised", "exercise"}, {"exercising", "exercise"},
    {"raced", "race"}, {"racing", "race"},
    {"survived", "survive"}, {"surviving", "survive"},
    {"received", "receive"}, {"receiving", "receive"},
    {"believed", "believe"}, {"believing", "believe"},
    {"changed", "change"}, {"changing", "change"},
    {"moved", "move"}, {"moving", "move"},
    {"smiled", "smile"}, {"smiling", "smile"},
    {"donated", "donate"}, {"donating", "donate"},
    {"celebrated", "celebrate"}, {"celebrating", "celebrate"},
    {"announced", "announce"}, {"announcing", "announce"},
    {"encouraged", "encourage"}, {"encouraging", "encourage"},
    {"improved", "improve"}, {"improving", "improve"},
    {"managed", "manage"}, {"managing", "manage"},
    {"measured", "measure"}, {"measuring", "measure"},
    {"noticed", "notice"}, {"noticing", "notice"},
    {"practiced", "practice"}, {"practicing", "practice"},
    {"prepared", "prepare"}, {"preparing", "prepare"},
    {"promised", "promise"}, {"promising", "promise"},
    {"removed", "remove"}, {"removing", "remove"},
    {"scheduled", "schedule"}, {"scheduling", "schedule"},
    {"served", "serve"}, {"serving", "serve"},
    {"smoked", "smoke"}, {"smoking", "smoke"},
    // domain nouns and -ing lemmas that the rules would overstem
    {"screening", "screening"}, {"screenings", "screening"},
    {"morning", "morning"}, {"mornings", "morning"},
    {"evening", "evening"}, {"evenings", "evening"},
    {"everything", "everything"}, {"nothing", "nothing"},
    {"something", "something"}, {"anything", "anything"},
    {"spring", "spring"}, {"string", "string"},
    {"feeling", "feeling"}, {"feelings", "feeling"},
    {"wedding", "wedding"}, {"weddings", "wedding"},
    {"building", "building"}, {"buildings", "building"},
    {"meeting", "meeting"}, {"meetings", "meeting"},
    {"training", "training"}, {"fundraising", "fundraising"},
    {"swimming", "swimming"}, {"wellbeing", "wellbeing"},
};

inline constexpr std::size_t kLemmaPairCount = sizeof(kLemmaPairs) / sizeof(kLemmaPairs[0]);

// The 50 most common English words; used by the ingest language heuristic.
inline constexpr const char* kEnglishTop50[] = {
    "the", "be", "to", "of", "and", "a", "in", "that", "have", "i",
    "it", "for", "not", "on", "with", "he", "as", "you", "do", "at",
    "this", "but", "his", "by", "from", "they", "we", "say", "her", "she",
    "or", "an", "will", "my", "one", "all", "would", "there", "their", "what",
    "so", "up", "out", "if", "about", "who", "get", "which", "go", "me",
};

inline constexpr std::size_t kEnglishTop50Count = sizeof(kEnglishTop50) / sizeof(kEnglishTop50[0]);

}  // namespace miner::data
