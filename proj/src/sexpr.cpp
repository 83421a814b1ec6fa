#include "sexpr.hpp"

#include <cctype>

namespace goalrec::sexpr {

void fail(const SourcePos& pos, const std::string& message) { throw ParseError(pos, message); }

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Node> read_all() {
    std::vector<Node> out;
    skip_blank();
    while (!at_end()) {
      out.push_back(read());
      skip_blank();
    }
    return out;
  }

 private:
  bool at_end() const { return offset_ >= text_.size(); }
  char peek() const { return text_[offset_]; }

  void advance() {
    if (text_[offset_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++offset_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Node read() {
    Node node;
    node.pos = pos_;
    if (peek() == ')') fail(pos_, "unexpected ')'");
    if (peek() == '(') {
      node.is_list = true;
      advance();
      skip_blank();
      while (!at_end() && peek() != ')') {
        node.children.push_back(read());
        skip_blank();
      }
      if (at_end()) fail(node.pos, "unterminated '('");
      advance();
      return node;
    }
    while (!at_end()) {
      char c = peek();
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      node.token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Node> parse_all(std::string_view text) { return Reader(text).read_all(); }

Node parse_one(std::string_view text) {
  auto nodes = parse_all(text);
  if (nodes.empty()) fail(SourcePos{}, "empty input");
  if (nodes.size() > 1) fail(nodes[1].pos, "trailing content after expression");
  return std::move(nodes.front());
}

}  // namespace goalrec::sexpr
