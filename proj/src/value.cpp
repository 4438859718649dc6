#include "seamlab/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "seamlab/error.hpp"

namespace seamlab {

const char* Value::kind_name() const {
    if (is_unset()) return "unset";
    if (is_number()) return "number";
    if (is_bool()) return "boolean";
    if (is_string()) return "string";
    if (is_array()) return "array";
    if (is_record()) return "record";
    if (is_closure()) return "closure";
    return "handle";
}

std::string format_number(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    if (d == 0) d = 0;  // canonicalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

std::string Value::display() const {
    if (is_unset()) return "<unset>";
    if (is_number()) return format_number(number());
    if (is_bool()) return boolean() ? "true" : "false";
    if (is_string()) return string();
    if (is_array()) {
        std::string out = "[";
        const auto& a = array();
        for (size_t i = 0; i < a.size(); ++i) {
            if (i) out += ", ";
            out += format_number(a[i]);
        }
        out += "]";
        return out;
    }
    if (is_record()) {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, v] : record().fields) {
            if (!first) out += ", ";
            first = false;
            out += k;
            out += ": ";
            out += v.is_string() ? "'" + v.string() + "'" : v.display();
        }
        out += "}";
        return out;
    }
    if (is_closure()) return "<closure>";
    return "@" + handle().name;
}

bool truthy(const Value& v) {
    if (v.is_bool()) return v.boolean();
    if (v.is_number()) return v.number() != 0;
    if (v.is_array()) {
        const auto& a = v.array();
        if (a.empty()) return false;
        for (double d : a)
            if (d == 0) return false;
        return true;
    }
    throw Error(ErrorKind::Type,
                std::string("value of kind '") + v.kind_name() + "' has no truthiness");
}

namespace {

bool numbers_equal(double a, double b) {
    if (a == 0) a = 0;
    if (b == 0) b = 0;
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

bool structurally_equal(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) return numbers_equal(a.number(), b.number());
    if (a.is_bool() && b.is_bool()) return a.boolean() == b.boolean();
    if (a.is_string() && b.is_string()) return a.string() == b.string();
    if (a.is_unset() && b.is_unset()) return true;
    if (a.is_array() && b.is_array()) {
        const auto& x = a.array();
        const auto& y = b.array();
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (!numbers_equal(x[i], y[i])) return false;
        return true;
    }
    if (a.is_record() && b.is_record()) {
        const auto& x = a.record().fields;
        const auto& y = b.record().fields;
        if (x.size() != y.size()) return false;
        auto it = y.begin();
        for (const auto& [k, v] : x) {
            if (it->first != k || !structurally_equal(v, it->second)) return false;
            ++it;
        }
        return true;
    }
    if (a.is_handle() && b.is_handle()) return a.handle().name == b.handle().name;
    if (a.is_closure() && b.is_closure()) return a.closure().body == b.closure().body;
    return false;
}

}  // namespace seamlab
