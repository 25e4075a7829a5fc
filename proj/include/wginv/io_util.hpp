// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_IO_UTIL_HPP
#define WGINV_IO_UTIL_HPP

#include <functional>
#include <iosfwd>
#include <string>

namespace wginv
{

// Writes through a temporary file in the same directory, then renames it into place.
void write_atomically(const std::string &path, const std::function<void(std::ostream &)> &writer);

}  // namespace wginv

#endif  // WGINV_IO_UTIL_HPP
