#ifndef ISR_CLI_HPP
#define ISR_CLI_HPP

namespace isr {

/// Command-line entry point (run / mesh / sweep / verify / curves /
/// mech-path). Returns the process exit code.
int cli_main(int argc, char** argv);

} // namespace isr

#endif
