// SPDX-License-Identifier: Apache-2.0
#include "airgnn/harness/cli.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

int main(int argc, char **argv)
{
#if defined(__GLIBC__)
    // Training allocates many short-lived matrices of a few hundred KB; keep
    // them on the heap instead of mapping and unmapping pages for each one.
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
    return airgnn::harness::run_cli(argc, argv);
}
