#pragma once

#include <exception>
#include <string>

namespace seamlab {

enum class ErrorKind {
    Lex,
    Parse,
    DuplicateLabel,
    UnknownLabel,
    LineOutOfRange,
    UnknownFunction,
    Runtime,
    RefClearedVar,
    UnsetOutput,
    BreakpointHit,
    Injection,
    JumpTarget,
    Arity,
    CaptureMiss,
    RecursionLimit,
    Type,
    StoreIO,
    Deserialize,
    NotSerializable,
};

const char* error_kind_name(ErrorKind kind);

/// All engine errors carry an optional (function, line) context which the
/// interpreter fills in while unwinding.
class Error : public std::exception {
public:
    Error(ErrorKind kind, std::string message)
        : kind_(kind), message_(std::move(message)) { rebuild(); }
    Error(ErrorKind kind, std::string message, std::string function, int line)
        : kind_(kind), message_(std::move(message)),
          function_(std::move(function)), line_(line) { rebuild(); }

    ErrorKind kind() const { return kind_; }
    const std::string& message() const { return message_; }
    const std::string& function() const { return function_; }
    int line() const { return line_; }
    int column() const { return column_; }

    bool has_context() const { return !function_.empty(); }
    void set_context(const std::string& function, int line) {
        function_ = function;
        line_ = line;
        rebuild();
    }
    void set_column(int column) { column_ = column; }

    // Three-line rendering used for diagnostics:
    //   identifier: 'RefClearedVarError'
    //   message: 'Reference to a cleared variable.'
    //   file: 'foo.ms::7'
    std::string render() const;

    const char* what() const noexcept override { return what_.c_str(); }

private:
    void rebuild();

    ErrorKind kind_;
    std::string message_;
    std::string function_;
    int line_ = 0;
    int column_ = 0;
    std::string what_;
};

}  // namespace seamlab
