#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "blr/bit_row.hpp"

namespace blr {

//! A replayable, pass-counted source of equal-width rows. Every traversal
//! yields the identical sequence; the pass counter increments exactly once
//! per completed traversal, and the row count n is fixed after the first
//! completed pass. Algorithms only ever touch data through this interface,
//! which is what makes their pass budgets checkable.
class PointStream {
public:
    virtual ~PointStream() = default;

    PointStream(const PointStream&) = delete;
    PointStream& operator=(const PointStream&) = delete;

    virtual std::size_t width() const = 0;

    //! Runs one complete pass, invoking fn on every row in stream order.
    //! A single consumer at a time: nested traversal is a logic error.
    void for_each_row(const std::function<void(const BitRow&)>& fn);

    std::uint64_t pass_count() const { return passes_; }

    bool size_known() const { return size_known_; }
    //! Total row count; only available once a pass has completed (in-memory
    //! sources know it immediately).
    std::uint64_t size() const;

protected:
    PointStream() = default;
    virtual void traverse(const std::function<void(const BitRow&)>& fn) = 0;
    void set_known_size(std::uint64_t n) {
        size_ = n;
        size_known_ = true;
    }

private:
    std::uint64_t passes_ = 0;
    std::uint64_t size_ = 0;
    bool size_known_ = false;
    bool in_pass_ = false;
};

//! Stream over an in-memory buffer of rows. The row count is known upfront.
class MemoryPointStream final : public PointStream {
public:
    //! All rows must share one width; an empty buffer needs the width spelled
    //! out. Throws WidthMismatchError on ragged input.
    explicit MemoryPointStream(std::vector<BitRow> rows, std::size_t width = 0);

    std::size_t width() const override { return width_; }
    const std::vector<BitRow>& rows() const { return rows_; }

protected:
    void traverse(const std::function<void(const BitRow&)>& fn) override;

private:
    std::vector<BitRow> rows_;
    std::size_t width_;
};

//! Stream over a bin01 text file, re-opened and re-read on every pass so
//! memory stays independent of n. The width is fixed from the first data
//! row at construction time.
class FilePointStream final : public PointStream {
public:
    explicit FilePointStream(std::string path,
                             std::size_t max_width = kDefaultMaxWidth);

    std::size_t width() const override { return width_; }
    const std::string& path() const { return path_; }

protected:
    void traverse(const std::function<void(const BitRow&)>& fn) override;

private:
    std::string path_;
    std::size_t width_ = 0;
    std::size_t max_width_;
};

//! Parses bin01 text: one row of '0'/'1' characters per line, '#' starts a
//! comment line, blank lines are skipped, all rows equal length.
std::vector<BitRow> parse_bin01(std::string_view text,
                                std::size_t max_width = kDefaultMaxWidth);

std::string format_bin01(const std::vector<BitRow>& rows);

}  // namespace blr
