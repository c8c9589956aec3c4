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

struct StateEntry {
  const char* name;  // lowercase full name
  const char* code;
};

inline constexpr StateEntry kStates[] = {
    {"alabama", "AL"}, {"alaska", "AK"}, {"arizona", "AZ"}, {"arkansas", "AR"},
    {"california", "CA"}, {"colorado", "CO"}, {"connecticut", "CT"}, {"delaware", "DE"},
    {"florida", "FL"}, {"georgia", "GA"}, {"hawaii", "HI"}, {"idaho", "ID"},
    {"illinois", "IL"}, {"indiana", "IN"}, {"iowa", "IA"}, {"kansas", "KS"},
    {"kentucky", "KY"}, {"louisiana", "LA"}, {"maine", "ME"}, {"maryland", "MD"},
    {"massachusetts", "MA"}, {"michigan", "MI"}, {"minnesota", "MN"}, {"mississippi", "MS"},
    {"missouri", "MO"}, {"montana", "MT"}, {"nebraska", "NE"}, {"nevada", "NV"},
    {"new hampshire", "NH"}, {"new jersey", "NJ"}, {"new mexico", "NM"}, {"new york", "NY"},
    {"north carolina", "NC"}, {"north dakota", "ND"}, {"ohio", "OH"}, {"oklahoma", "OK"},
    {"oregon", "OR"}, {"pennsylvania", "PA"}, {"rhode island", "RI"}, {"south carolina", "SC"},
    {"south dakota", "SD"}, {"tennessee", "TN"}, {"texas", "TX"}, {"utah", "UT"},
    {"vermont", "VT"}, {"virginia", "VA"}, {"washington", "WA"}, {"west virginia", "WV"},
    {"wisconsin", "WI"}, {"wyoming", "WY"}, {"district of columbia", "DC"},
};

inline constexpr std::size_t kStateCount = sizeof(kStates) / sizeof(kStates[0]);

// Major US cities with unique state membership. Names that collide across
// states (springfield, portland, columbus, ...) are deliberately absent:
// ambiguity means abstention.
inline constexpr StateEntry kCities[] = {
    // special multi-word disambiguations
    {"washington dc", "DC"}, {"washington d c", "DC"},
    {"new york city", "NY"}, {"nyc", "NY"},
    {"costa mesa", "CA"}, {"boulder city", "NV"},
    // northeast
    {"brooklyn", "NY"}, {"queens", "NY"}, {"bronx", "NY"}, {"staten island", "NY"},
    {"buffalo", "NY"}, {"syracuse", "NY"}, {"yonkers", "NY"}, {"long island", "NY"},
    {"boston", "MA"}, {"worcester", "MA"}, {"lowell", "MA"}, {"brockton", "MA"},
    {"new bedford", "MA"}, {"cambridge", "MA"},
    {"providence", "RI"}, {"pawtucket", "RI"}, {"cranston", "RI"},
    {"hartford", "CT"}, {"new haven", "CT"}, {"bridgeport", "CT"}, {"stamford", "CT"},
    {"waterbury", "CT"},
    {"nashua", "NH"}, {"montpelier", "VT"}, {"rutland", "VT"}, {"bangor", "ME"},
    {"philadelphia", "PA"}, {"pittsburgh", "PA"}, {"allentown", "PA"}, {"erie", "PA"},
    {"scranton", "PA"}, {"harrisburg", "PA"},
    {"jersey city", "NJ"}, {"trenton", "NJ"}, {"paterson", "NJ"}, {"atlantic city", "NJ"},
    {"hoboken", "NJ"},
    {"baltimore", "MD"}, {"annapolis", "MD"}, {"rockville", "MD"}, {"bethesda", "MD"},
    {"silver spring", "MD"},
    // south
    {"virginia beach", "VA"}, {"norfolk", "VA"}, {"chesapeake", "VA"}, {"roanoke", "VA"},
    {"charlottesville", "VA"}, {"lynchburg", "VA"}, {"newport news", "VA"},
    {"morgantown", "WV"}, {"wheeling", "WV"}, {"parkersburg", "WV"},
    {"charlotte", "NC"}, {"raleigh", "NC"}, {"durham", "NC"}, {"greensboro", "NC"},
    {"winston salem", "NC"}, {"asheville", "NC"}, {"chapel hill", "NC"},
    {"myrtle beach", "SC"}, {"spartanburg", "SC"}, {"hilton head", "SC"},
    {"atlanta", "GA"}, {"savannah", "GA"}, {"macon", "GA"},
    {"miami", "FL"}, {"orlando", "FL"}, {"tampa", "FL"}, {"st petersburg", "FL"},
    {"saint petersburg", "FL"}, {"tallahassee", "FL"}, {"fort lauderdale", "FL"},
    {"hialeah", "FL"}, {"sarasota", "FL"}, {"pensacola", "FL"}, {"boca raton", "FL"},
    {"key west", "FL"}, {"daytona beach", "FL"},
    {"birmingham", "AL"}, {"tuscaloosa", "AL"},
    {"gulfport", "MS"}, {"biloxi", "MS"}, {"hattiesburg", "MS"}, {"tupelo", "MS"},
    {"nashville", "TN"}, {"memphis", "TN"}, {"knoxville", "TN"}, {"chattanooga", "TN"},
    {"murfreesboro", "TN"},
    {"louisville", "KY"}, {"lexington", "KY"}, {"paducah", "KY"},
    {"new orleans", "LA"}, {"baton rouge", "LA"}, {"shreveport", "LA"}, {"metairie", "LA"},
    {"little rock", "AR"}, {"fort smith", "AR"}, {"hot springs", "AR"},
    {"oklahoma city", "OK"}, {"tulsa", "OK"}, {"broken arrow", "OK"}, {"edmond", "OK"},
    {"houston", "TX"}, {"dallas", "TX"}, {"san antonio", "TX"}, {"austin", "TX"},
    {"fort worth", "TX"}, {"el paso", "TX"}, {"corpus christi", "TX"}, {"laredo", "TX"},
    {"lubbock", "TX"}, {"plano", "TX"}, {"amarillo", "TX"}, {"irving", "TX"},
    {"waco", "TX"}, {"galveston", "TX"},
    // midwest
    {"chicago", "IL"}, {"naperville", "IL"}, {"evanston", "IL"}, {"joliet", "IL"},
    {"rockford", "IL"},
    {"indianapolis", "IN"}, {"fort wayne", "IN"}, {"south bend", "IN"}, {"evansville", "IN"},
    {"muncie", "IN"},
    {"detroit", "MI"}, {"grand rapids", "MI"}, {"ann arbor", "MI"}, {"lansing", "MI"},
    {"flint", "MI"}, {"dearborn", "MI"}, {"kalamazoo", "MI"},
    {"cleveland", "OH"}, {"cincinnati", "OH"}, {"toledo", "OH"}, {"akron", "OH"},
    {"dayton", "OH"}, {"youngstown", "OH"},
    {"milwaukee", "WI"}, {"madison", "WI"}, {"green bay", "WI"}, {"kenosha", "WI"},
    {"racine", "WI"},
    {"minneapolis", "MN"}, {"saint paul", "MN"}, {"st paul", "MN"}, {"duluth", "MN"},
    {"st louis", "MO"}, {"saint louis", "MO"}, {"branson", "MO"}, {"jefferson city", "MO"},
    {"des moines", "IA"}, {"cedar rapids", "IA"}, {"davenport", "IA"}, {"sioux city", "IA"},
    {"iowa city", "IA"}, {"dubuque", "IA"},
    {"wichita", "KS"}, {"topeka", "KS"}, {"overland park", "KS"}, {"olathe", "KS"},
    {"omaha", "NE"}, {"kearney", "NE"}, {"grand island", "NE"},
    {"fargo", "ND"}, {"bismarck", "ND"}, {"grand forks", "ND"}, {"minot", "ND"},
    {"sioux falls", "SD"}, {"rapid city", "SD"},
    // west
    {"denver", "CO"}, {"colorado springs", "CO"}, {"boulder", "CO"}, {"fort collins", "CO"},
    {"pueblo", "CO"},
    {"billings", "MT"}, {"missoula", "MT"}, {"bozeman", "MT"}, {"helena", "MT"},
    {"cheyenne", "WY"}, {"casper", "WY"}, {"laramie", "WY"},
    {"boise", "ID"}, {"idaho falls", "ID"}, {"pocatello", "ID"}, {"coeur d alene", "ID"},
    {"salt lake city", "UT"}, {"provo", "UT"}, {"ogden", "UT"}, {"orem", "UT"},
    {"st george", "UT"},
    {"albuquerque", "NM"}, {"santa fe", "NM"}, {"las cruces", "NM"}, {"taos", "NM"},
    {"phoenix", "AZ"}, {"tucson", "AZ"}, {"mesa", "AZ"}, {"scottsdale", "AZ"},
    {"tempe", "AZ"}, {"chandler", "AZ"}, {"flagstaff", "AZ"}, {"yuma", "AZ"},
    {"las vegas", "NV"}, {"reno", "NV"}, {"carson city", "NV"}, {"sparks", "NV"},
    {"los angeles", "CA"}, {"san francisco", "CA"}, {"san diego", "CA"}, {"san jose", "CA"},
    {"sacramento", "CA"}, {"fresno", "CA"}, {"oakland", "CA"}, {"long beach", "CA"},
    {"bakersfield", "CA"}, {"anaheim", "CA"}, {"santa ana", "CA"}, {"stockton", "CA"},
    {"irvine", "CA"}, {"fremont", "CA"}, {"chula vista", "CA"}, {"santa monica", "CA"},
    {"berkeley", "CA"}, {"palo alto", "CA"}, {"san bernardino", "CA"}, {"modesto", "CA"},
    {"oxnard", "CA"}, {"malibu", "CA"},
    {"seattle", "WA"}, {"spokane", "WA"}, {"tacoma", "WA"}, {"olympia", "WA"},
    {"eugene", "OR"}, {"beaverton", "OR"}, {"gresham", "OR"},
    {"anchorage", "AK"}, {"fairbanks", "AK"}, {"juneau", "AK"},
    {"honolulu", "HI"}, {"hilo", "HI"}, {"maui", "HI"}, {"waikiki", "HI"},
};

inline constexpr std::size_t kCityCount = sizeof(kCities) / sizeof(kCities[0]);

}  // namespace miner::data
