#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seqspace/check.hpp"
#include "seqspace/convexity.hpp"
#include "seqspace/duality.hpp"
#include "seqspace/factorization.hpp"
#include "seqspace/matrix.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace::io {

using Json = nlohmann::ordered_json;

/// Parse errors are raised as ErrorKind::parse.
Json parse_json(std::string_view text);

/// `arg` is inline JSON when it starts with '{', '[' or '"', otherwise a path.
std::string read_argument(const std::string& arg);
std::string read_file(const std::string& path);

/// {"family": "cesaro", "alpha": 1.0}, {"family": "diagonal", "weights": [...]},
/// {"family": "custom", "entries": [[n, k, re, im], ...]}, ... A bare string
/// names a parameterless family.
MatrixDescriptor matrix_from_json(const Json& spec);
Json matrix_info(const MatrixDescriptor& m, double p, Index truncation);

/// A JSON array of numbers or [re, im] pairs, or {"values": [...], "finite_support": bool}.
TruncatedSequence sequence_from_json(const Json& data);
/// CSV with columns index,re,im; a header line is optional; missing indices are 0.
TruncatedSequence sequence_from_csv(std::string_view text);
/// Dispatches on the first non-blank character.
TruncatedSequence sequence_from_text(std::string_view text);

Json to_json(Complex value);
Json to_json(const TruncatedSequence& x);
Json to_json(const Check& check);
Json to_json(const std::vector<Check>& checks);
Json to_json(const NormReport& report);
Json to_json(const Partition& partition);
Json to_json(const FactorizationCertificate& cert);
Json to_json(const ModulusEstimate& estimate);
Json to_json(const UniformWitness& witness);
Json to_json(const DualCheckReport& report);
Json to_json(const ColumnGrowth& growth);
Json to_json(const MembershipDiagnostic& diagnostic);

}  // namespace seqspace::io
