#ifndef GFADAPT_Y4M_H_
#define GFADAPT_Y4M_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "gfadapt/frame.h"

namespace gfadapt {

enum class ChromaFormat { k420, k444 };

// Bytes of one chroma plane for a luma plane of width x height.
int64_t ChromaPlaneSize(int width, int height, ChromaFormat format);

// Reads a YUV4MPEG2 stream. Only 8-bit progressive 4:2:0 (any siting) and
// 4:4:4 are accepted; chroma is skipped. Throws ParseError carrying the
// byte offset of the offending token or record.
VideoSequence LoadY4m(std::istream& in, std::string source_name = {});
VideoSequence LoadY4mFile(const std::string& path);

// Writes `seq` as 4:2:0 with all chroma samples set to 128. Returns the
// number of bytes written. Throws IoError if the sink fails.
int64_t WriteY4m(const VideoSequence& seq, std::ostream& out);
int64_t WriteY4mFile(const VideoSequence& seq, const std::string& path);

// Headerless planar 8-bit YUV. The stream length must be a whole number of
// frames.
VideoSequence LoadRawYuv(std::istream& in, int width, int height,
                         ChromaFormat format, FrameRate frame_rate = {},
                         std::string source_name = {});
VideoSequence LoadRawYuvFile(const std::string& path, int width, int height,
                             ChromaFormat format, FrameRate frame_rate = {});

}  // namespace gfadapt

#endif  // GFADAPT_Y4M_H_
