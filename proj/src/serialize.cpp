#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "seamlab/error.hpp"
#include "seamlab/testkit.hpp"

namespace seamlab {

namespace {

void serialize_into(const Value& v, std::string& out) {
    if (v.is_number()) {
        double d = v.number();
        out += format_number(d == 0 ? 0 : d);
        return;
    }
    if (v.is_bool()) {
        out += v.boolean() ? "true" : "false";
        return;
    }
    if (v.is_string()) {
        out += '\'';
        for (char c : v.string()) {
            out += c;
            if (c == '\'') out += '\'';
        }
        out += '\'';
        return;
    }
    if (v.is_array()) {
        out += '[';
        const auto& a = v.array();
        for (size_t i = 0; i < a.size(); ++i) {
            if (i) out += ", ";
            out += format_number(a[i] == 0 ? 0 : a[i]);
        }
        out += ']';
        return;
    }
    if (v.is_record()) {
        out += '{';
        bool first = true;
        for (const auto& [k, val] : v.record().fields) {
            for (char c : k)
                if (c == ':' || c == ',' || c == '{' || c == '}' || c == '\'' ||
                    c == '[' || c == ']' || std::isspace(static_cast<unsigned char>(c)))
                    throw Error(ErrorKind::NotSerializable,
                                "record key '" + k + "' is not serializable");
            if (k.empty())
                throw Error(ErrorKind::NotSerializable, "empty record key");
            if (!first) out += ", ";
            first = false;
            out += k;
            out += ": ";
            serialize_into(val, out);
        }
        out += '}';
        return;
    }
    throw Error(ErrorKind::NotSerializable,
                std::string("a ") + v.kind_name() + " cannot be serialized");
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    Value parse_value() {
        skip_ws();
        if (at_end()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '\'') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_record();
        if (c == 't' || c == 'f') return parse_bool();
        return parse_number();
    }

    void expect_done() {
        skip_ws();
        if (!at_end()) fail("trailing characters");
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    bool at_end() const { return pos_ >= text_.size(); }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Deserialize,
                    what + " at offset " + std::to_string(pos_));
    }
    bool consume(char c) {
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Value parse_string() {
        ++pos_;  // opening quote
        std::string out;
        while (!at_end()) {
            char c = text_[pos_++];
            if (c == '\'') {
                if (!at_end() && text_[pos_] == '\'') {
                    out += '\'';
                    ++pos_;
                    continue;
                }
                return Value(std::move(out));
            }
            out += c;
        }
        fail("unterminated string");
    }

    double parse_raw_number() {
        skip_ws();
        size_t start = pos_;
        if (consume('-')) {}
        if (!at_end() && (text_.compare(pos_, 3, "inf") == 0)) {
            pos_ += 3;
        } else if (!at_end() && text_.compare(pos_, 3, "nan") == 0) {
            pos_ += 3;
        } else {
            while (!at_end() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                 text_[pos_] == '.' || text_[pos_] == 'e' ||
                                 text_[pos_] == 'E' || text_[pos_] == '+' ||
                                 text_[pos_] == '-'))
                ++pos_;
        }
        if (pos_ == start) fail("expected number");
        std::string tok = text_.substr(start, pos_ - start);
        const char* s = tok.c_str();
        char* end = nullptr;
        double d;
        if (tok == "inf") d = HUGE_VAL;
        else if (tok == "-inf") d = -HUGE_VAL;
        else if (tok == "nan") d = std::nan("");
        else {
            d = std::strtod(s, &end);
            if (end != s + tok.size()) fail("malformed number '" + tok + "'");
        }
        return d;
    }

    Value parse_number() { return Value(parse_raw_number()); }

    Value parse_bool() {
        if (text_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            return Value(true);
        }
        if (text_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            return Value(false);
        }
        fail("expected 'true' or 'false'");
    }

    Value parse_array() {
        ++pos_;  // '['
        Value::Array out;
        skip_ws();
        if (consume(']')) return Value(std::move(out));
        for (;;) {
            out.push_back(parse_raw_number());
            skip_ws();
            if (consume(']')) return Value(std::move(out));
            if (!consume(',')) fail("expected ',' or ']'");
        }
    }

    Value parse_record() {
        ++pos_;  // '{'
        Value::Record out;
        skip_ws();
        if (consume('}')) return Value(std::move(out));
        for (;;) {
            skip_ws();
            std::string key;
            while (!at_end() && text_[pos_] != ':' &&
                   !std::isspace(static_cast<unsigned char>(text_[pos_])))
                key += text_[pos_++];
            if (key.empty()) fail("expected record key");
            skip_ws();
            if (!consume(':')) fail("expected ':'");
            out.fields[key] = parse_value();
            skip_ws();
            if (consume('}')) return Value(std::move(out));
            if (!consume(',')) fail("expected ',' or '}'");
        }
    }
};

}  // namespace

std::string serialize(const Value& v) {
    std::string out;
    serialize_into(v, out);
    return out;
}

Value deserialize(const std::string& text) {
    Reader reader(text);
    Value v = reader.parse_value();
    reader.expect_done();
    return v;
}

}  // namespace seamlab
