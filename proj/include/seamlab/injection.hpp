#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seamlab/machine.hpp"
#include "seamlab/value.hpp"

namespace seamlab {

// The ...at key functions. All registration calls take the function name
// first, then name/value pairs with 'at' (or 'goto') selecting the site;
// selectors are label text like '<FOO:1>' or a line number. These are also
// exposed as MiniScript builtins so suites can be written in-language.

void gotoat(Machine& m, const std::string& fun, const SiteSelector& target);
void assignat(Machine& m, const std::string& fun, const SiteSelector& site,
              const std::vector<std::pair<std::string, Value>>& pairs);
void captureat(Machine& m, const std::string& fun, const SiteSelector& site,
               const std::optional<std::string>& var = std::nullopt);
Value::Record captureat(Machine& m);  // retrieval; drains the store
void returnat(Machine& m, const std::string& fun, const SiteSelector& site);
void evalat(Machine& m, const std::string& fun, const SiteSelector& site,
            const Value::Closure& callback);
void clearat(Machine& m);
void clearat(Machine& m, const std::string& fun);

/// Builds a selector from a MiniScript argument: a string (label, angle
/// brackets optional) or a number.
SiteSelector selector_from_value(const Value& v);

/// Capture-store key for a selector: label with the colon stripped
/// ("FOO:2" -> "FOO2"), or "L<line>" for numeric sites.
std::string capture_key_for(const SiteSelector& selector);

}  // namespace seamlab
