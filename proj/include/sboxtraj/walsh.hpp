/*
 * SPDX-FileCopyrightText: Copyright 2026 The sboxtraj Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cassert>
#include <cstddef>
#include <span>

namespace sboxtraj {

/// In-place unnormalized Walsh-Hadamard butterfly; size must be a power of two.
template <class T>
void fwht(std::span<T> a)
{
    const std::size_t len = a.size();
    assert((len & (len - 1)) == 0);
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t k = i; k < i + h; ++k) {
                T u = a[k];
                T v = a[k + h];
                a[k] = u + v;
                a[k + h] = u - v;
            }
        }
    }
}

} // namespace sboxtraj
