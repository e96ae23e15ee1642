#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sevrel::cli {

// Plain ASCII table, columns padded to their widest cell.
class Table {
public:
    explicit Table(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    void print(std::ostream& out) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace sevrel::cli
