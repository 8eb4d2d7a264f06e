#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gfadapt/error.h"
#include "gfadapt/frame.h"
#include "gfadapt/y4m.h"
#include "test_support.h"

namespace gfadapt {
namespace {

using testing::RandomFrame;

std::string FramePayload(int width, int height, ChromaFormat format,
                         uint8_t luma) {
  std::string payload = "FRAME\n";
  payload.append(size_t(width) * size_t(height), char(luma));
  payload.append(size_t(2 * ChromaPlaneSize(width, height, format)),
                 char(0x55));
  return payload;
}

TEST(Y4mTest, LoadsThreeFrame420Stream) {
  std::string data = "YUV4MPEG2 W64 H48 F30:1 C420\n";
  for (int i = 0; i < 3; ++i) {
    data += FramePayload(64, 48, ChromaFormat::k420, uint8_t(10 * i));
  }
  std::istringstream in(data);
  const VideoSequence seq = LoadY4m(in);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq.width(), 64);
  EXPECT_EQ(seq.height(), 48);
  EXPECT_EQ(seq.frame_rate(), (FrameRate{30, 1}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(seq.frame(size_t(i)), FramePlane(64, 48, uint8_t(10 * i)));
  }
}

TEST(Y4mTest, Loads444AndSkipsChroma) {
  std::string data = "YUV4MPEG2 W16 H16 F25:1 Ip A1:1 C444 XYSCSS=444\n";
  data += FramePayload(16, 16, ChromaFormat::k444, 7);
  data += FramePayload(16, 16, ChromaFormat::k444, 9);
  std::istringstream in(data);
  const VideoSequence seq = LoadY4m(in);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq.frame(1), FramePlane(16, 16, 9));
}

TEST(Y4mTest, ZeroFramesIsAnError) {
  const std::string header = "YUV4MPEG2 W64 H48 F30:1 C420\n";
  std::istringstream in(header);
  try {
    LoadY4m(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no frames"), std::string::npos);
    EXPECT_EQ(e.offset(), int64_t(header.size()));
  }
}

TEST(Y4mTest, RejectsBadSignature) {
  std::istringstream in("YUV4MPEG W64 H48\n");
  try {
    LoadY4m(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0);
  }
}

TEST(Y4mTest, RejectsHighBitDepthWithOffset) {
  std::istringstream in("YUV4MPEG2 W64 H48 C420p10\n");
  try {
    LoadY4m(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bit depth"), std::string::npos);
    EXPECT_EQ(e.offset(), 18);
  }
}

TEST(Y4mTest, RejectsUnsupportedColorspaceAndInterlacing) {
  std::istringstream c422("YUV4MPEG2 W64 H48 C422\n");
  EXPECT_THROW(LoadY4m(c422), ParseError);
  std::istringstream interlaced("YUV4MPEG2 W64 H48 It\n");
  EXPECT_THROW(LoadY4m(interlaced), ParseError);
  std::istringstream no_size("YUV4MPEG2 F30:1\n");
  EXPECT_THROW(LoadY4m(no_size), ParseError);
}

TEST(Y4mTest, TruncatedPayloadReportsFrameOffset) {
  const std::string header = "YUV4MPEG2 W16 H16 C420\n";
  const std::string first = FramePayload(16, 16, ChromaFormat::k420, 1);
  std::string second = FramePayload(16, 16, ChromaFormat::k420, 2);
  second.resize(second.size() - 5);
  std::istringstream in(header + first + second);
  try {
    LoadY4m(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), int64_t(header.size() + first.size()));
  }
}

TEST(Y4mTest, RejectsGarbageBetweenFrames) {
  std::string data = "YUV4MPEG2 W16 H16 C420\n";
  data += FramePayload(16, 16, ChromaFormat::k420, 1);
  data += "FRAMX\n";
  std::istringstream in(data);
  EXPECT_THROW(LoadY4m(in), ParseError);
}

TEST(Y4mTest, WriteSizeArithmetic) {
  const VideoSequence seq({FramePlane(16, 16, 128)});
  std::ostringstream out;
  const int64_t written = WriteY4m(seq, out);
  const std::string bytes = out.str();
  const size_t header_len = bytes.find('\n') + 1;
  EXPECT_EQ(written, int64_t(bytes.size()));
  EXPECT_EQ(bytes.size(), header_len + 6 + 16 * 16 + 2 * (8 * 8));
  // Chroma is neutral.
  EXPECT_EQ(bytes.back(), char(128));
}

TEST(Y4mTest, EmptySequenceIsRejected) {
  EXPECT_THROW(VideoSequence({}), InvalidArgument);
}

TEST(Y4mTest, MixedFrameSizesAreRejected) {
  EXPECT_THROW(VideoSequence({FramePlane(16, 16), FramePlane(32, 16)}),
               InvalidArgument);
}

// Round trip on random geometry, including odd sizes whose 4:2:0 chroma
// planes round up.
TEST(Y4mTest, LumaRoundTripProperty) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> dim(16, 70);
  std::uniform_int_distribution<int> count(1, 4);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    std::vector<FramePlane> frames;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) frames.push_back(RandomFrame(w, h, rng));
    const VideoSequence original(frames, FrameRate{24000, 1001});

    std::stringstream buffer;
    const int64_t written = WriteY4m(original, buffer);
    EXPECT_EQ(written, int64_t(buffer.str().size()));
    const VideoSequence loaded = LoadY4m(buffer);
    ASSERT_EQ(loaded.size(), original.size());
    EXPECT_EQ(loaded.frame_rate(), original.frame_rate());
    for (size_t i = 0; i < loaded.size(); ++i) {
      EXPECT_EQ(loaded.frame(i), original.frame(i)) << "trial " << trial;
    }
  }
}

TEST(RawYuvTest, LoadsWholeFramesAndRejectsPartial) {
  std::string data;
  for (int i = 0; i < 2; ++i) {
    data.append(32 * 16, char(i + 1));
    data.append(size_t(2 * ChromaPlaneSize(32, 16, ChromaFormat::k420)),
                char(128));
  }
  std::istringstream in(data);
  const VideoSequence seq = LoadRawYuv(in, 32, 16, ChromaFormat::k420);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq.frame(1), FramePlane(32, 16, 2));

  std::istringstream truncated(data.substr(0, data.size() - 1));
  EXPECT_THROW(LoadRawYuv(truncated, 32, 16, ChromaFormat::k420), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(LoadRawYuv(empty, 32, 16, ChromaFormat::k420), ParseError);
}

TEST(FramePlaneTest, RejectsTinyAndMismatchedPlanes) {
  EXPECT_THROW(FramePlane(15, 16), InvalidArgument);
  EXPECT_THROW(FramePlane(16, 16, std::vector<uint8_t>(100)), InvalidArgument);
}

TEST(FramePlaneTest, PadReplicatesEdges) {
  std::mt19937 rng(5);
  const FramePlane f = RandomFrame(17, 20, rng);
  const FramePlane p = PadToMultiple(f, 16);
  ASSERT_EQ(p.width(), 32);
  ASSERT_EQ(p.height(), 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      EXPECT_EQ(p.at(x, y), f.at(std::min(x, 16), std::min(y, 19)));
    }
  }
  EXPECT_EQ(PadToMultiple(p, 16), p);
}

}  // namespace
}  // namespace gfadapt
