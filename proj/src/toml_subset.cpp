#include "padicwf/toml_subset.hpp"

#include "padicwf/padic_core.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace padicwf {

using nlohmann::json;

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    json run()
    {
        json root = json::object();
        json* current = &root;
        while (true) {
            skip_blank_lines();
            if (eof())
                break;
            if (peek() == '[') {
                current = header(root);
            } else {
                key_value(*current);
            }
            end_of_line();
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::Parse, "toml line " + std::to_string(line_) + ": " + msg);
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
    char get()
    {
        if (eof())
            fail("unexpected end of input");
        const char c = s_[pos_++];
        if (c == '\n')
            ++line_;
        return c;
    }
    void expect(char c)
    {
        if (get() != c)
            fail(std::string("expected '") + c + "'");
    }

    void skip_spaces()
    {
        while (peek() == ' ' || peek() == '\t')
            ++pos_;
    }
    void skip_comment()
    {
        if (peek() == '#')
            while (!eof() && peek() != '\n')
                ++pos_;
    }
    // Whitespace, comments and newlines, as allowed inside arrays.
    void skip_all()
    {
        while (true) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n' || peek() == '\r')
                get();
            else
                break;
        }
    }
    void skip_blank_lines() { skip_all(); }
    void end_of_line()
    {
        skip_spaces();
        skip_comment();
        if (peek() == '\r')
            ++pos_;
        if (!eof() && get() != '\n')
            fail("expected end of line");
    }

    std::string key_part()
    {
        skip_spaces();
        if (peek() == '"' || peek() == '\'')
            return string_value();
        std::string k;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')
            k += get();
        if (k.empty())
            fail("expected a key");
        return k;
    }
    std::vector<std::string> key_path()
    {
        std::vector<std::string> path{key_part()};
        skip_spaces();
        while (peek() == '.') {
            get();
            path.push_back(key_part());
            skip_spaces();
        }
        return path;
    }

    json* header(json& root)
    {
        expect('[');
        const bool array = peek() == '[';
        if (array)
            get();
        const auto path = key_path();
        expect(']');
        if (array)
            expect(']');
        json* node = &root;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            node = descend(*node, path[i]);
        const std::string& last = path.back();
        if (array) {
            json& slot = (*node)[last];
            if (slot.is_null())
                slot = json::array();
            if (!slot.is_array())
                fail("'" + last + "' is not an array of tables");
            slot.push_back(json::object());
            return &slot.back();
        }
        if (node->contains(last))
            fail("table '" + last + "' defined twice");
        (*node)[last] = json::object();
        return &(*node)[last];
    }

    json* descend(json& node, const std::string& key)
    {
        json& next = node[key];
        if (next.is_null())
            next = json::object();
        if (next.is_array() && !next.empty() && next.back().is_object())
            return &next.back();
        if (!next.is_object())
            fail("'" + key + "' is not a table");
        return &next;
    }

    void key_value(json& table)
    {
        const auto path = key_path();
        skip_spaces();
        expect('=');
        skip_spaces();
        json* node = &table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            node = descend(*node, path[i]);
        if (node->contains(path.back()))
            fail("duplicate key '" + path.back() + "'");
        (*node)[path.back()] = value();
    }

    json value()
    {
        const char c = peek();
        if (c == '"' || c == '\'')
            return string_value();
        if (c == '[')
            return array_value();
        if (c == '{')
            return inline_table();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return number();
    }

    json number()
    {
        std::string digits;
        if (peek() == '+' || peek() == '-')
            digits += get();
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
            const char c = get();
            if (c != '_')
                digits += c;
        }
        const char next = peek();
        if (next == '.' || next == 'e' || next == 'E' || s_.substr(pos_, 3) == "inf" || s_.substr(pos_, 3) == "nan")
            fail("float literals are not accepted; write rationals as \"a/b\" strings");
        if (next == '-' || next == ':')
            fail("dates and times are not supported");
        if (digits.empty() || digits == "+" || digits == "-")
            fail("expected a value");
        try {
            return std::stoll(digits);
        } catch (const std::exception&) {
            fail("integer out of range");
        }
    }

    std::string string_value()
    {
        const char quote = get();
        if (peek() == quote && peek(1) == quote)
            fail("multi-line strings are not supported");
        std::string out;
        while (true) {
            const char c = get();
            if (c == '\n')
                fail("unterminated string");
            if (c == quote)
                break;
            if (c == '\\' && quote == '"') {
                const char e = get();
                switch (e) {
                case '"':
                case '\\':
                    out += e;
                    break;
                case 'n':
                    out += '\n';
                    break;
                case 't':
                    out += '\t';
                    break;
                default:
                    fail(std::string("unsupported escape \\") + e);
                }
                continue;
            }
            out += c;
        }
        return out;
    }

    json array_value()
    {
        expect('[');
        json arr = json::array();
        skip_all();
        while (peek() != ']') {
            arr.push_back(value());
            skip_all();
            if (peek() == ',') {
                get();
                skip_all();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        get();
        return arr;
    }

    json inline_table()
    {
        expect('{');
        json table = json::object();
        skip_spaces();
        if (peek() == '}') {
            get();
            return table;
        }
        while (true) {
            key_value(table);
            skip_spaces();
            const char c = get();
            if (c == '}')
                break;
            if (c != ',')
                fail("expected ',' or '}' in inline table");
            skip_spaces();
        }
        return table;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

json parse_toml_subset(std::string_view text)
{
    return Reader(text).run();
}

}  // namespace padicwf
