#include "histspec/cli/trace_csv.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "histspec/errors.hpp"

namespace histspec::trace_csv {

void write(std::ostream& out, const AscentTrace& trace) {
    out << kHeader << '\n';
    out << std::setprecision(12);
    for (const TraceRecord& r : trace.records) {
        out << r.iteration << ',' << r.ssim << ',' << r.predicted_delta << ','
            << r.actual_delta << ',' << r.elapsed_s << '\n';
    }
}

void write_file(const std::filesystem::path& path, const AscentTrace& trace) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    write(out, trace);
}

}  // namespace histspec::trace_csv
