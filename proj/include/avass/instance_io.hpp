// instance_io.hpp -- the line-oriented instance language and generator inputs
#pragma once

#include <string>
#include <vector>

#include "avass/gen_lba.hpp"
#include "avass/gen_pcp.hpp"
#include "avass/reduce.hpp"
#include "avass/vass.hpp"

namespace avass {

struct InstanceQuery {
  bool cover = false;
  ReachQuery query;
};

struct InstanceFile {
  AffineVass system;
  std::vector<InstanceQuery> queries;
};

/// Grammar (one directive per line, '#' starts a comment):
///   vass d=<INT>
///   state <ID>...
///   trans <ID> -> <ID> [mat I | mat [row; row; ...]] [vec [n n ...]]
///   query reach <ID> [n ...] <ID> [n ...]
///   query cover <ID> [n ...] <ID> [n ...]
/// Errors carry the offending line number.
InstanceFile parse_instance(const std::string& text);

std::string serialize_instance(const AffineVass& v,
                               const std::vector<InstanceQuery>& queries = {});

/// Same format; stage tags and labels appear as trailing comments.
std::string serialize_reduced(const ReducedVass& r, const InstanceQuery& query);

/// lba / tape / input / initial / accept / reject / delta p a -> q b L|R /
/// word <string>
Lba parse_lba_file(const std::string& text, std::string* word_out);

/// pcp followed by `tile <bits> <bits>` lines
PcpInstance parse_pcp_file(const std::string& text);

}  // namespace avass
