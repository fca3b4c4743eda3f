//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/parallel.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace blmix
{
//---------------------------------------------------------------------------//
/*!
 * Run body(worker, begin, end) over [0, count) split into contiguous chunks.
 *
 * Callers write results into per-index or per-worker slots and reduce them
 * afterwards; nothing here depends on scheduling order. The first exception
 * thrown by a worker is rethrown on the calling thread.
 */
template<class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body)
{
    unsigned const workers = static_cast<unsigned>(
        std::clamp<std::size_t>(count, 1, std::max(1u, threads)));
    if (workers == 1)
    {
        body(0u, std::size_t{0}, count);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
        {
            std::size_t const begin = count * w / workers;
            std::size_t const end = count * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try
                {
                    body(w, begin, end);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                    {
                        error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
}

}  // namespace blmix
