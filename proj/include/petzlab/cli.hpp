#pragma once

namespace petzlab {

// Full command-line front end. Exit codes: 0 success, 1 mathematical
// failure (a check with failing instances), 2 usage or I/O errors.
int cli_main(int argc, char** argv);

}  // namespace petzlab
