#include "seamlab/error.hpp"

namespace seamlab {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Lex: return "LexError";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::DuplicateLabel: return "DuplicateLabelError";
        case ErrorKind::UnknownLabel: return "UnknownLabelError";
        case ErrorKind::LineOutOfRange: return "LineOutOfRangeError";
        case ErrorKind::UnknownFunction: return "UnknownFunctionError";
        case ErrorKind::Runtime: return "RuntimeError";
        case ErrorKind::RefClearedVar: return "RefClearedVarError";
        case ErrorKind::UnsetOutput: return "UnsetOutputError";
        case ErrorKind::BreakpointHit: return "BreakpointHitError";
        case ErrorKind::Injection: return "InjectionError";
        case ErrorKind::JumpTarget: return "JumpTargetError";
        case ErrorKind::Arity: return "ArityError";
        case ErrorKind::CaptureMiss: return "CaptureMissError";
        case ErrorKind::RecursionLimit: return "RecursionLimitError";
        case ErrorKind::Type: return "TypeError";
        case ErrorKind::StoreIO: return "StoreIOError";
        case ErrorKind::Deserialize: return "DeserializeError";
        case ErrorKind::NotSerializable: return "NotSerializableError";
    }
    return "Error";
}

std::string Error::render() const {
    std::string out;
    out += "identifier: '";
    out += error_kind_name(kind_);
    out += "'\nmessage: '";
    out += message_;
    out += "'";
    if (!function_.empty()) {
        out += "\nfile: '";
        out += function_;
        out += ".ms::";
        out += std::to_string(line_);
        out += "'";
    }
    return out;
}

void Error::rebuild() {
    what_ = error_kind_name(kind_);
    what_ += ": ";
    what_ += message_;
    if (!function_.empty()) {
        what_ += " (";
        what_ += function_;
        what_ += ".ms::";
        what_ += std::to_string(line_);
        what_ += ")";
    }
}

}  // namespace seamlab
