#pragma once

#include <string>

#include "stabcert/types.hpp"

namespace stabcert {

// CSV layout: header "x1,...,xd,y" for labeled files, "x1,...,xd" for
// unlabeled ones; one numeric row per point.  Loaders reject malformed input
// with the offending line number in the message; writers emit shortest
// round-trip decimal so save/load is lossless.

LabeledDataset load_labeled_csv(const std::string& path);
UnlabeledDataset load_unlabeled_csv(const std::string& path);

// Parse from an in-memory buffer (loaders above are thin file wrappers);
// `origin` names the source in error messages.
LabeledDataset parse_labeled_csv(const std::string& text,
                                 const std::string& origin);
UnlabeledDataset parse_unlabeled_csv(const std::string& text,
                                     const std::string& origin);

std::string labeled_to_csv(const LabeledDataset& data);
std::string unlabeled_to_csv(const UnlabeledDataset& data);

void save_labeled_csv(const LabeledDataset& data, const std::string& path);
void save_unlabeled_csv(const UnlabeledDataset& data, const std::string& path);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// FNV-1a over the canonical CSV serialization; reports quote this so a
/// certificate can be matched to the data file it was computed from.
std::string labeled_digest(const LabeledDataset& data);
std::string unlabeled_digest(const UnlabeledDataset& data);

}  // namespace stabcert
