#pragma once
// The `kif` command line, as a library so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "kif/store.hpp"

namespace kif::cli {

enum ExitCode : int { ok = 0, usage_error = 2, transport_error = 3 };

// Runs `kif <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

// Store for one --store spec:
//   sparql:<url>  rdf:<file.nt>  memory:<fixture.sexp>  mapper:<spec.json>@<sparql:... | rdf:...>
// Throws InvalidValue for a malformed spec.
StorePtr open_store(const std::string& spec, const StoreOptions& options);

// Stops a running `serve` command; safe from a signal handler.
void stop_serving() noexcept;

} // namespace kif::cli
