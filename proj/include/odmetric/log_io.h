#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "odmetric/domain.h"

namespace odmetric {

struct ParseOptions {
  // Unknown fields are an error unless lenient, in which case they are
  // skipped and reported through the warnings sink.
  bool lenient = false;
};

// Parses a line-delimited log. Record kinds, one JSON object per line:
//   {"type":"approach","id":str,"class":str,"contacted":bool,
//    "frames":[{"d":num,"t":num,"s":num},...]}
//   {"type":"clear","id":str,"hours":num,"alarms":[{"t":num,"s":num},...]}
//   {"type":"meta","values":{str:str,...}}
// Blank lines are skipped. Throws ParseError on the first violation.
LogBundle ParseLog(std::string_view text, const ParseOptions& options = {},
                   std::vector<std::string>* warnings = nullptr);

LogBundle ReadLogFile(const std::string& path, const ParseOptions& options = {},
                      std::vector<std::string>* warnings = nullptr);

// Emits the same format. Meta first, then approaches, then clear segments.
// Numbers use the shortest representation that parses back bit-exactly.
std::string SerializeLog(const LogBundle& bundle);

}  // namespace odmetric
