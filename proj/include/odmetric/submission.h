#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "odmetric/domain.h"

namespace odmetric {

struct ValidationReport {
  bool pass = true;
  std::vector<std::string> violations;
};

// Violations are reported as data; this never throws.
ValidationReport ValidateSubmission(const SubmissionRecord& record);

// One {"system":str,"x":num,"fp_per_h":num,"dist_m":num} object per line.
// Throws ParseError for syntax or schema problems; value ranges are left to
// ValidateSubmission.
std::vector<SubmissionRecord> ParseSubmissions(std::string_view text);

std::string SerializeSubmission(const SubmissionRecord& record);

}  // namespace odmetric
