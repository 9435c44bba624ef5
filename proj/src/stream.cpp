#include "blr/stream.hpp"

#include <fstream>
#include <stdexcept>

#include "blr/errors.hpp"

namespace blr {

namespace {

// Rows-times-width guard: totals are held in 64-bit integers downstream.
void check_volume(std::uint64_t rows, std::size_t width) {
    if (width == 0) return;
    const std::uint64_t cap = std::uint64_t{1} << 63;
    if (rows > cap / width)
        throw LimitsExceededError("dataset volume exceeds n*d <= 2^63");
}

// Strips a trailing '\r' so CRLF files parse like LF files.
std::string_view trim_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool is_data_line(std::string_view line) {
    return !line.empty() && line.front() != '#';
}

}  // namespace

void PointStream::for_each_row(const std::function<void(const BitRow&)>& fn) {
    if (in_pass_)
        throw std::logic_error("PointStream: nested traversal of a single-consumer stream");
    in_pass_ = true;
    std::uint64_t count = 0;
    try {
        traverse([&](const BitRow& row) {
            ++count;
            check_volume(count, row.width());
            fn(row);
        });
    } catch (...) {
        in_pass_ = false;
        throw;
    }
    in_pass_ = false;
    if (size_known_) {
        if (count != size_)
            throw Error("PointStream: source changed length between passes");
    } else {
        set_known_size(count);
    }
    ++passes_;
}

std::uint64_t PointStream::size() const {
    if (!size_known_)
        throw std::logic_error("PointStream: size requested before first completed pass");
    return size_;
}

MemoryPointStream::MemoryPointStream(std::vector<BitRow> rows, std::size_t width)
    : rows_(std::move(rows)), width_(width) {
    if (!rows_.empty()) width_ = rows_.front().width();
    for (const auto& row : rows_)
        if (row.width() != width_)
            throw WidthMismatchError("MemoryPointStream: ragged row widths");
    check_volume(rows_.size(), width_);
    set_known_size(rows_.size());
}

void MemoryPointStream::traverse(const std::function<void(const BitRow&)>& fn) {
    for (const auto& row : rows_) fn(row);
}

FilePointStream::FilePointStream(std::string path, std::size_t max_width)
    : path_(std::move(path)), max_width_(max_width) {
    std::ifstream in(path_);
    if (!in) throw ParseError("cannot open input file: " + path_);
    std::string line;
    while (std::getline(in, line)) {
        const auto data = trim_line(line);
        if (!is_data_line(data)) continue;
        if (data.size() > max_width_)
            throw ParseError("row width " + std::to_string(data.size()) +
                             " exceeds the cap of " + std::to_string(max_width_));
        width_ = data.size();
        return;
    }
    throw ParseError("no data rows in " + path_);
}

void FilePointStream::traverse(const std::function<void(const BitRow&)>& fn) {
    std::ifstream in(path_);
    if (!in) throw ParseError("cannot open input file: " + path_);
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto data = trim_line(line);
        if (!is_data_line(data)) continue;
        if (data.size() != width_)
            throw ParseError(path_ + ":" + std::to_string(line_no) +
                             ": row width " + std::to_string(data.size()) +
                             " differs from " + std::to_string(width_));
        fn(BitRow::from_string(data));
    }
}

std::vector<BitRow> parse_bin01(std::string_view text, std::size_t max_width) {
    std::vector<BitRow> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const auto raw = end == std::string_view::npos
                             ? text.substr(start)
                             : text.substr(start, end - start);
        ++line_no;
        const auto data = trim_line(raw);
        if (is_data_line(data)) {
            if (data.size() > max_width)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": row width exceeds the cap of " +
                                 std::to_string(max_width));
            if (!rows.empty() && data.size() != rows.front().width())
                throw ParseError("line " + std::to_string(line_no) +
                                 ": rows must all have equal length");
            try {
                rows.push_back(BitRow::from_string(data));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    check_volume(rows.size(), rows.empty() ? 0 : rows.front().width());
    return rows;
}

std::string format_bin01(const std::vector<BitRow>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.to_string();
        out += '\n';
    }
    return out;
}

}  // namespace blr
