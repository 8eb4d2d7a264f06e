#include "gfadapt/y4m.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

constexpr std::string_view kSignature = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
constexpr size_t kMaxHeaderLength = 4096;

struct Y4mHeader {
  int width = 0;
  int height = 0;
  FrameRate frame_rate;
  ChromaFormat chroma = ChromaFormat::k420;
};

// Tracks the absolute byte position so every error can point into the
// stream.
class CountingReader {
 public:
  explicit CountingReader(std::istream& in) : in_(in) {}

  int64_t offset() const { return offset_; }

  // Reads up to and excluding '\n'. Returns nullopt on EOF before any byte.
  // Throws if the line exceeds `limit` or EOF hits mid-line.
  std::optional<std::string> ReadLine(size_t limit, std::string_view what) {
    std::string line;
    const int64_t start = offset_;
    for (;;) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (line.empty()) return std::nullopt;
        throw ParseError(fmt::format("unterminated {} line", what), start);
      }
      ++offset_;
      if (c == '\n') return line;
      line.push_back(char(c));
      if (line.size() > limit) {
        throw ParseError(fmt::format("{} line too long", what), start);
      }
    }
  }

  // Fills `out` completely; returns false if the stream ended early.
  bool ReadExact(uint8_t* out, int64_t count) {
    in_.read(reinterpret_cast<char*>(out), count);
    offset_ += in_.gcount();
    return in_.gcount() == count;
  }

  bool Skip(int64_t count) {
    std::vector<char> scratch(size_t(std::min<int64_t>(count, 1 << 16)));
    while (count > 0) {
      const auto chunk = std::min<int64_t>(count, int64_t(scratch.size()));
      in_.read(scratch.data(), chunk);
      offset_ += in_.gcount();
      if (in_.gcount() != chunk) return false;
      count -= chunk;
    }
    return true;
  }

 private:
  std::istream& in_;
  int64_t offset_ = 0;
};

int ParsePositiveInt(std::string_view text, int64_t offset,
                     std::string_view what) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value <= 0) {
    throw ParseError(fmt::format("invalid {} '{}'", what, text), offset);
  }
  return value;
}

std::pair<int, int> ParseRatio(std::string_view text, int64_t offset,
                               std::string_view what) {
  const size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(fmt::format("invalid {} '{}'", what, text), offset);
  }
  int num = 0;
  int den = 0;
  const auto lhs = text.substr(0, colon);
  const auto rhs = text.substr(colon + 1);
  const auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), num);
  const auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), den);
  if (r1.ec != std::errc() || r1.ptr != lhs.data() + lhs.size() ||
      r2.ec != std::errc() || r2.ptr != rhs.data() + rhs.size() || num < 0 ||
      den < 0) {
    throw ParseError(fmt::format("invalid {} '{}'", what, text), offset);
  }
  return {num, den};
}

ChromaFormat ParseColorspace(std::string_view tag, int64_t offset) {
  if (tag == "420" || tag == "420jpeg" || tag == "420paldv" ||
      tag == "420mpeg2") {
    return ChromaFormat::k420;
  }
  if (tag == "444") return ChromaFormat::k444;
  if (tag.find('p') != std::string_view::npos) {
    throw ParseError(fmt::format("unsupported bit depth in colorspace 'C{}'",
                                 tag),
                     offset);
  }
  throw ParseError(fmt::format("unsupported colorspace 'C{}'", tag), offset);
}

Y4mHeader ParseHeader(CountingReader& reader) {
  const auto line = reader.ReadLine(kMaxHeaderLength, "stream header");
  if (!line || std::string_view(*line).substr(0, kSignature.size()) !=
                   kSignature) {
    throw ParseError("missing YUV4MPEG2 signature", 0);
  }
  std::string_view rest = std::string_view(*line).substr(kSignature.size());
  if (!rest.empty() && rest.front() != ' ') {
    throw ParseError("missing YUV4MPEG2 signature", 0);
  }

  Y4mHeader header;
  int64_t pos = int64_t(kSignature.size());
  while (!rest.empty()) {
    if (rest.front() == ' ') {
      rest.remove_prefix(1);
      ++pos;
      continue;
    }
    const size_t end = std::min(rest.find(' '), rest.size());
    const std::string_view token = rest.substr(0, end);
    const std::string_view value = token.substr(1);
    switch (token.front()) {
      case 'W':
        header.width = ParsePositiveInt(value, pos, "width");
        break;
      case 'H':
        header.height = ParsePositiveInt(value, pos, "height");
        break;
      case 'F': {
        const auto [num, den] = ParseRatio(value, pos, "frame rate");
        header.frame_rate = {num, den};
        break;
      }
      case 'I':
        if (value != "p" && value != "?") {
          throw ParseError(
              fmt::format("unsupported interlacing mode 'I{}'", value), pos);
        }
        break;
      case 'A':
        ParseRatio(value, pos, "pixel aspect ratio");
        break;
      case 'C':
        header.chroma = ParseColorspace(value, pos);
        break;
      case 'X':
        break;
      default:
        throw ParseError(fmt::format("unknown header token '{}'", token), pos);
    }
    rest.remove_prefix(end);
    pos += int64_t(end);
  }

  if (header.width == 0 || header.height == 0) {
    throw ParseError("header lacks W or H", reader.offset());
  }
  if (header.width < kMinFrameDimension || header.height < kMinFrameDimension) {
    throw ParseError(fmt::format("frame size {}x{} below minimum {}",
                                 header.width, header.height,
                                 kMinFrameDimension),
                     0);
  }
  return header;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  return out;
}

std::ifstream OpenForRead(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  return in;
}

}  // namespace

int64_t ChromaPlaneSize(int width, int height, ChromaFormat format) {
  if (format == ChromaFormat::k444) return int64_t{width} * height;
  return int64_t{(width + 1) / 2} * ((height + 1) / 2);
}

VideoSequence LoadY4m(std::istream& in, std::string source_name) {
  CountingReader reader(in);
  const Y4mHeader header = ParseHeader(reader);
  const int64_t luma_size = int64_t{header.width} * header.height;
  const int64_t chroma_size =
      2 * ChromaPlaneSize(header.width, header.height, header.chroma);

  std::vector<FramePlane> frames;
  for (;;) {
    const int64_t record_start = reader.offset();
    const auto marker = reader.ReadLine(kMaxHeaderLength, "FRAME");
    if (!marker) break;
    const std::string_view tag(*marker);
    if (tag.substr(0, kFrameMarker.size()) != kFrameMarker ||
        (tag.size() > kFrameMarker.size() &&
         tag[kFrameMarker.size()] != ' ')) {
      throw ParseError("expected FRAME marker", record_start);
    }
    std::vector<uint8_t> luma(static_cast<size_t>(luma_size));
    if (!reader.ReadExact(luma.data(), luma_size) ||
        !reader.Skip(chroma_size)) {
      throw ParseError(
          fmt::format("truncated payload in frame {}", frames.size()),
          record_start);
    }
    frames.emplace_back(header.width, header.height, std::move(luma));
  }
  if (frames.empty()) throw ParseError("no frames", reader.offset());
  return VideoSequence(std::move(frames), header.frame_rate,
                       std::move(source_name));
}

VideoSequence LoadY4mFile(const std::string& path) {
  std::ifstream in = OpenForRead(path);
  return LoadY4m(in, path);
}

int64_t WriteY4m(const VideoSequence& seq, std::ostream& out) {
  const std::string header =
      fmt::format("{} W{} H{} F{}:{} Ip A1:1 C420jpeg\n", kSignature,
                  seq.width(), seq.height(), seq.frame_rate().num,
                  seq.frame_rate().den);
  const std::vector<char> chroma(
      size_t(2 * ChromaPlaneSize(seq.width(), seq.height(), ChromaFormat::k420)),
      char(128));
  constexpr std::string_view kFrameLine = "FRAME\n";

  int64_t written = 0;
  out.write(header.data(), std::streamsize(header.size()));
  written += int64_t(header.size());
  for (const FramePlane& frame : seq.frames()) {
    out.write(kFrameLine.data(), std::streamsize(kFrameLine.size()));
    out.write(reinterpret_cast<const char*>(frame.samples().data()),
              std::streamsize(frame.samples().size()));
    out.write(chroma.data(), std::streamsize(chroma.size()));
    written += int64_t(kFrameLine.size() + frame.samples().size() +
                       chroma.size());
  }
  out.flush();
  if (!out) throw IoError("failed writing y4m stream");
  return written;
}

int64_t WriteY4mFile(const VideoSequence& seq, const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  return WriteY4m(seq, out);
}

VideoSequence LoadRawYuv(std::istream& in, int width, int height,
                         ChromaFormat format, FrameRate frame_rate,
                         std::string source_name) {
  if (width < kMinFrameDimension || height < kMinFrameDimension) {
    throw InvalidArgument(fmt::format("raw frame size {}x{} below minimum {}",
                                      width, height, kMinFrameDimension));
  }
  CountingReader reader(in);
  const int64_t luma_size = int64_t{width} * height;
  const int64_t chroma_size = 2 * ChromaPlaneSize(width, height, format);

  std::vector<FramePlane> frames;
  for (;;) {
    const int64_t record_start = reader.offset();
    std::vector<uint8_t> luma(static_cast<size_t>(luma_size));
    in.peek();
    if (in.eof()) break;
    if (!reader.ReadExact(luma.data(), luma_size) ||
        !reader.Skip(chroma_size)) {
      throw ParseError(
          fmt::format("truncated raw frame {}", frames.size()), record_start);
    }
    frames.emplace_back(width, height, std::move(luma));
  }
  if (frames.empty()) throw ParseError("no frames", reader.offset());
  return VideoSequence(std::move(frames), frame_rate, std::move(source_name));
}

VideoSequence LoadRawYuvFile(const std::string& path, int width, int height,
                             ChromaFormat format, FrameRate frame_rate) {
  std::ifstream in = OpenForRead(path);
  return LoadRawYuv(in, width, height, format, frame_rate, path);
}

}  // namespace gfadapt
