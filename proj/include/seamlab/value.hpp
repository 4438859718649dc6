#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace seamlab {

struct Expr;

/// Dynamic runtime value. Numbers are 64-bit floats; arrays are 1-D numeric
/// vectors; records keep their fields ordered by key.
class Value {
public:
    struct Unset {};
    using Array = std::vector<double>;
    struct Record {
        std::map<std::string, Value> fields;
        bool operator==(const Record&) const = default;
    };
    struct Closure {
        std::vector<std::string> params;
        std::shared_ptr<const Expr> body;
        std::shared_ptr<const std::map<std::string, Value>> captured;
    };
    struct Handle {
        std::string name;
    };

    Value() : v_(Unset{}) {}
    Value(double d) : v_(d) {}
    Value(bool b) : v_(b) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(Array a) : v_(std::move(a)) {}
    Value(Record r) : v_(std::move(r)) {}
    Value(Closure c) : v_(std::move(c)) {}
    Value(Handle h) : v_(std::move(h)) {}

    bool is_unset() const { return std::holds_alternative<Unset>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }
    bool is_record() const { return std::holds_alternative<Record>(v_); }
    bool is_closure() const { return std::holds_alternative<Closure>(v_); }
    bool is_handle() const { return std::holds_alternative<Handle>(v_); }

    double number() const { return std::get<double>(v_); }
    bool boolean() const { return std::get<bool>(v_); }
    const std::string& string() const { return std::get<std::string>(v_); }
    const Array& array() const { return std::get<Array>(v_); }
    Array& array() { return std::get<Array>(v_); }
    const Record& record() const { return std::get<Record>(v_); }
    Record& record() { return std::get<Record>(v_); }
    const Closure& closure() const { return std::get<Closure>(v_); }
    const Handle& handle() const { return std::get<Handle>(v_); }

    /// Human-readable name of the value's kind, for error messages.
    const char* kind_name() const;

    /// Display form used by disp and failure reports.
    std::string display() const;

private:
    std::variant<Unset, double, bool, std::string, Array, Record, Closure, Handle> v_;
};

/// Implicit boolean coercion: booleans as-is, numbers nonzero, arrays
/// nonempty with all elements nonzero. Anything else is a TypeError.
bool truthy(const Value& v);

/// Deep structural equality. -0 is canonicalized to 0 and NaN equals NaN,
/// otherwise numbers compare bit-for-bit. Different kinds never compare equal.
bool structurally_equal(const Value& a, const Value& b);

/// Shortest round-trip decimal rendering; integral doubles have no ".0".
std::string format_number(double d);

}  // namespace seamlab
