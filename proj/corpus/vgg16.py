# VGG16 (configuration D) for 32x32 inputs.
import torch.nn as nn

NUM_CLASSES = 10


def VGG16():
    return nn.Sequential(
        nn.Conv2d(3, 64, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(64, 64, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.MaxPool2d(kernel_size=2, stride=2),
        nn.Conv2d(64, 128, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(128, 128, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.MaxPool2d(kernel_size=2, stride=2),
        nn.Conv2d(128, 256, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(256, 256, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(256, 256, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.MaxPool2d(kernel_size=2, stride=2),
        nn.Conv2d(256, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(512, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(512, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.MaxPool2d(kernel_size=2, stride=2),
        nn.Conv2d(512, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(512, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.Conv2d(512, 512, kernel_size=3, padding=1), nn.ReLU(inplace=True),
        nn.MaxPool2d(kernel_size=2, stride=2),
        nn.Flatten(),
        nn.Dropout(0.5),
        nn.Linear(512, 512), nn.ReLU(inplace=True),
        nn.Dropout(0.5),
        nn.Linear(512, 512), nn.ReLU(inplace=True),
        nn.Dropout(0.5),
        nn.Linear(512, NUM_CLASSES),
    )


model = VGG16()
