// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/io_util.hpp"

#include <filesystem>
#include <fstream>

#include "wginv/error.hpp"

namespace wginv
{

void write_atomically(const std::string &path, const std::function<void(std::ostream &)> &writer)
{
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path())
  {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
    {
      fail(ErrorCode::IoFailure, "cannot write '" + tmp.string() + "'");
    }
    writer(os);
    os.flush();
    if (!os)
    {
      fail(ErrorCode::IoFailure, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
  {
    fail(ErrorCode::IoFailure, "rename to '" + path + "' failed: " + ec.message());
  }
}

}  // namespace wginv
