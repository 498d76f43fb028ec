#ifndef MIRROR_IO_HPP
#define MIRROR_IO_HPP

#include "mirror/chain_models.hpp"
#include "mirror/equivalences.hpp"
#include "mirror/many_body.hpp"
#include "mirror/permutation.hpp"
#include "mirror/polynomials.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mirror::io {

using Json = nlohmann::ordered_json;

/// {"n_sites", "couplings", "fields", "family": {"kind", "p"?, "q"?}, "predicted_period"}
Json to_json(const ChainSpecd& spec);
/// Validates lengths; family chains must match their closed form.
ChainSpecd chain_from_json(const Json& doc);

/// {"time", "phases": [{"m", "re", "im"}], "max_deviation", "pass"}
Json to_json(const MirrorCertificate<double>& cert);
Json to_json(const EquivalenceReport<double>& report);
/// {"n_sites", "steps": [[start, end], ...]}
Json to_json(const ReversalPlan& plan);
ReversalPlan plan_from_json(const Json& doc);

ChainSpecd read_chain(const std::string& path);
/// Writes to standard output when path is "-".
void write_text(const std::string& path, const std::string& text);

struct TimeGrid {
  double start = 0;
  double stop = 0;
  double step = 0;

  std::vector<double> points() const;
};

/// Parses "start:stop:step".
TimeGrid parse_time_grid(const std::string& text);

/// "t,fidelity" rows with 12 significant digits.
std::string fidelity_csv(const Eigensystemd& es, const TimeGrid& grid);
/// "k,l,phi" rows with 17 significant digits.
std::string table_csv(const EigenfunctionTabled& table);

}  // namespace mirror::io

#endif  // MIRROR_IO_HPP
