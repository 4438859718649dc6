#pragma once

#include <map>
#include <memory>
#include <string>

#include "seamlab/ast.hpp"
#include "seamlab/token.hpp"

namespace seamlab {

struct LabelEntry {
    std::string function;  // enclosing function, or the script/program name
    int line;              // line of the labeled comment
};

/// Comment-label index: "<NAME:NUM>" tokens inside comments mark injection
/// sites. A label may occur at most once per file.
struct LabelIndex {
    std::map<std::string, LabelEntry> entries;
};

std::shared_ptr<Program> parse(const std::vector<Token>& tokens, const std::string& path);

LabelIndex index_labels(const std::string& source_text, const Program& program);

/// A site selector: either label text (with or without angle brackets) or a
/// line number.
struct SiteSelector {
    enum class Kind { Label, Line } kind;
    std::string label;  // without angle brackets
    int line = 0;

    static SiteSelector from_label(std::string text);
    static SiteSelector from_line(int line);
};

struct ResolvedSite {
    std::string function;
    int line;  // source line of the site (label comment line or numeric line)
};

ResolvedSite resolve_site(const LabelIndex& index, const Program& program,
                          const std::string& function, const SiteSelector& selector);

/// File stem without directory or extension ("dir/foo.ms" -> "foo").
std::string path_stem(const std::string& path);

}  // namespace seamlab
